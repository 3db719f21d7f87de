"""Exception types raised by the library."""


class SinginvError(Exception):
    """Base class for all library errors."""


class ArityMismatch(SinginvError, ValueError):
    """Operands live in rings (or free modules) of different sizes."""


class ParseError(SinginvError, ValueError):
    def __init__(self, message, text="", pos=None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
            if text:
                message += f"\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class NotIsolated(SinginvError):
    """The singularity at the origin is not isolated (infinite Milnor number)."""


class NotIsolatedGlobally(SinginvError):
    """The singular locus of V(f) is not zero-dimensional."""


class NotFiniteLength(SinginvError):
    """A quotient module expected to have finite length does not."""


class PowerCapExceeded(SinginvError):
    pass


class BrianconSkodaViolation(SinginvError):
    """No power f^d with d <= n lies in the gradient ideal; signals an engine bug."""


class NonHomogeneousInput(SinginvError, ValueError):
    pass


class ZeroDivisorInput(SinginvError, ValueError):
    """Colon by the zero element or the zero ideal."""
