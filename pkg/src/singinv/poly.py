"""Sparse multivariate polynomials over Q and monomial orders.

Polynomials are immutable values: a map from exponent tuples to nonzero
``gmpy2.mpq`` coefficients plus the number of variables.  They carry no
monomial order; an order is passed to each computation that needs one, so
the same polynomial can be read in the polynomial ring (global order) or in
the localization at the origin (local order).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .errors import ArityMismatch

Monomial = tuple  # exponent vector, tuple[int, ...]

DEGREVLEX = "degrevlex"
NEGDEGREVLEX = "negdegrevlex"


def to_q(value) -> mpq:
    """Coerce int, Fraction, mpq or a rational string such as '3/4' to mpq."""
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    return mpq(value)


def q_to_fraction(value) -> Fraction:
    value = mpq(value)
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class MonomialOrder:
    """Degree reverse lexicographic order (global) or its negative-degree
    variant (local, 1 > x_i).  Variables are ranked x_1 > x_2 > ... > x_n."""

    kind: str
    nvars: int

    def __post_init__(self):
        if self.kind not in (DEGREVLEX, NEGDEGREVLEX):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.nvars < 1:
            raise ValueError("nvars must be positive")

    @classmethod
    def global_(cls, nvars: int) -> "MonomialOrder":
        return cls(DEGREVLEX, nvars)

    @classmethod
    def local(cls, nvars: int) -> "MonomialOrder":
        return cls(NEGDEGREVLEX, nvars)

    @property
    def is_local(self) -> bool:
        return self.kind == NEGDEGREVLEX

    def key(self, m: Monomial) -> tuple:
        """Sort key; a larger key means a larger monomial."""
        deg = sum(m)
        tail = tuple(-e for e in reversed(m))
        return (-deg if self.is_local else deg, tail)

    def compare(self, a: Monomial, b: Monomial) -> int:
        return compare_monomials(a, b, self)


def compare_monomials(a: Monomial, b: Monomial, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b) or len(a) != order.nvars:
        raise ArityMismatch(f"monomials of length {len(a)} and {len(b)} under an order on {order.nvars} variables")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


class Polynomial:
    __slots__ = ("_terms", "nvars", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], object] | None = None, nvars: int = 1):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise ArityMismatch(f"monomial {mono} does not have {nvars} exponents")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = to_q(coeff)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean
        self.nvars = nvars
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        # terms must already be clean: tuple keys, nonzero mpq values
        p = cls.__new__(cls)
        p._terms = terms
        p.nvars = nvars
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        c = to_q(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        """The i-th variable, 0-based."""
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): mpq(1)}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Polynomial":
        return cls({tuple(exps): coeff}, len(exps))

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Copy of the term map, keyed by exponent tuple."""
        return dict(self._terms)

    def items(self):
        """Terms in the fixed canonical (lexicographic) order."""
        return sorted(self._terms.items())

    def coefficient(self, mono: Sequence[int]) -> mpq:
        return self._terms.get(tuple(mono), mpq(0))

    def support(self) -> list:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (order at the origin); -1 for zero."""
        return min((sum(m) for m in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def constant_part(self) -> mpq:
        return self._terms.get((0,) * self.nvars, mpq(0))

    def leading_term(self, order: MonomialOrder):
        if not self._terms:
            return None
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ArityMismatch(f"polynomials in {self.nvars} and {other.nvars} variables")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, type(mpq(0)))):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial._raw(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = to_q(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({m: c * v for m, v in self._terms.items()}, self.nvars)

    def mul_monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        c = to_q(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(
            {tuple(a + b for a, b in zip(m, exps)): c * v for m, v in self._terms.items()}, self.nvars
        )

    def diff(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Polynomial._raw(out, self.nvars)

    def gradient(self) -> list:
        return [self.diff(i) for i in range(self.nvars)]

    def evaluate(self, point: Sequence) -> mpq:
        total = mpq(0)
        point = [to_q(v) for v in point]
        for m, c in self._terms.items():
            t = c
            for v, e in zip(point, m):
                if e:
                    t *= v**e
            total += t
        return total

    def divide_exact(self, other: "Polynomial", order: MonomialOrder | None = None):
        """Return q with self == q * other, or None if other does not divide self."""
        self._check(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        order = order or MonomialOrder.global_(self.nvars)
        lm, lc = other.leading_term(order)
        rem = self
        quot = Polynomial.zero(self.nvars)
        while rem:
            m, c = rem.leading_term(order)
            if any(a < b for a, b in zip(m, lm)):
                return None
            shift = tuple(a - b for a, b in zip(m, lm))
            t = Polynomial._raw({shift: c / lc}, self.nvars)
            quot = quot + t
            rem = rem - t * other
        return quot

    # -- value semantics --------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, type(mpq(0)))):
            return self == Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, nvars={self.nvars})"

    def __str__(self):
        return format_polynomial(self)


def default_names(nvars: int) -> list:
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


def _format_monomial(m, names) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial, names: Sequence[str] | None = None,
                      order: MonomialOrder | None = None) -> str:
    """Render ``f`` in the input grammar, terms descending in ``order``
    (degrevlex by default).  The output parses back to ``f``."""
    names = list(names or default_names(f.nvars))
    if len(names) != f.nvars:
        raise ArityMismatch(f"{len(names)} names for {f.nvars} variables")
    if not f:
        return "0"
    order = order or MonomialOrder.global_(f.nvars)
    out = []
    for m in sorted(f._terms, key=order.key, reverse=True):
        c = f._terms[m]
        mono = _format_monomial(m, names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += sign + body
    return text


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def differentiate(f: Polynomial, i: int) -> Polynomial:
    return f.diff(i)


def constant_part(f: Polynomial) -> mpq:
    return f.constant_part()


def ensure_same_arity(polys: Iterable[Polynomial]) -> int:
    n = None
    for p in polys:
        if n is None:
            n = p.nvars
        elif p.nvars != n:
            raise ArityMismatch(f"polynomials in {n} and {p.nvars} variables")
    if n is None:
        raise ValueError("empty polynomial list")
    return n
