"""Logarithmic derivations of a polynomial f.

Derlog(f) is read off the syzygies of (f, f_x1, ..., f_xn) over the
polynomial ring by dropping the first coordinate.  The Koszul derivations
f_i d/dx_j - f_j d/dx_i and f d/dx_i are the obvious members; the quotient
by them is the first Koszul homology of (f, f_x1, ..., f_xn), whose length
and generator count at the origin are computed in the local ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import NonHomogeneousInput, NotFiniteLength, NotIsolatedGlobally
from .ideals import ideal_equal
from .invariants import tjurina_ideal, jacobian_ideal
from .poly import MonomialOrder, Polynomial, default_names, format_polynomial
from .stdbasis import INFINITE, corner_degree
from .syzygy import (
    SyzygyMatrix,
    koszul_boundaries,
    local_min_gens,
    min_gens_finite_length,
    minimalize_columns,
    module_membership,
    quotient_length,
    syzygies,
)


@dataclass(frozen=True)
class Derivation:
    """sum coeffs[i] * d/dx_i."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a derivation needs at least one coefficient")

    @property
    def nvars(self) -> int:
        return self.coeffs[0].nvars

    def apply(self, g: Polynomial) -> Polynomial:
        out = Polynomial.zero(g.nvars)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + c * g.diff(i)
        return out

    def is_logarithmic(self, f: Polynomial) -> bool:
        """eta(f) is a polynomial multiple of f."""
        value = self.apply(f)
        return not value or value.divide_exact(f) is not None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def format(self, names: Sequence[str] | None = None) -> str:
        names = list(names or default_names(self.nvars))
        parts = []
        for c, name in zip(self.coeffs, names):
            if not c:
                continue
            text = format_polynomial(c, names)
            if text == "1":
                body = f"∂/∂{name}"
            elif text == "-1":
                body = f"-∂/∂{name}"
            elif len(c) == 1:
                body = f"{text}*∂/∂{name}"
            else:
                body = f"({text})*∂/∂{name}"
            parts.append(body)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __str__(self):
        return self.format()


def euler_derivation(nvars: int) -> Derivation:
    return Derivation(tuple(Polynomial.variable(i, nvars) for i in range(nvars)))


def _tagged(f: Polynomial, coeffs) -> Derivation:
    d = Derivation(coeffs)
    if not d.is_logarithmic(f):
        raise AssertionError(f"derivation {d} is not logarithmic along {f}")
    return d


def _as_matrix(derivations: Sequence[Derivation], nvars: int) -> SyzygyMatrix:
    return SyzygyMatrix(tuple(d.coeffs for d in derivations), nvars, nvars)


def _extended(f: Polynomial) -> list:
    return [f] + f.gradient()


def derlog_generators(f: Polynomial) -> list:
    """Generators of Derlog(f) over the polynomial ring."""
    if not f:
        raise ValueError("Derlog of the zero polynomial is everything")
    Z = syzygies(_extended(f), MonomialOrder.global_(f.nvars))
    return [_tagged(f, col[1:]) for col in Z.columns if any(col[1:])]


def koszul_derivations(f: Polynomial) -> list:
    """f_i d/dx_j - f_j d/dx_i for i < j, then f d/dx_i."""
    n = f.nvars
    grad = f.gradient()
    zero = Polynomial.zero(n)
    out = []
    for i, j in combinations(range(n), 2):
        coeffs = [zero] * n
        coeffs[j] = grad[i]
        coeffs[i] = -grad[j]
        out.append(_tagged(f, coeffs))
    for i in range(n):
        coeffs = [zero] * n
        coeffs[i] = f
        out.append(_tagged(f, coeffs))
    return out


def minimal_derlog_generators(f: Polynomial) -> list:
    """derlog_generators with redundant members dropped (greedy, global ring)."""
    gens = derlog_generators(f)
    M = minimalize_columns(_as_matrix(gens, f.nvars), MonomialOrder.global_(f.nvars))
    return [Derivation(c) for c in M.columns]


def local_derlog_rank(f: Polynomial) -> int:
    """Minimal number of generators of Derlog(f) at the origin."""
    Z = syzygies(_extended(f), MonomialOrder.global_(f.nvars))
    cols = [c[1:] for c in Z.columns if any(c[1:])]
    return local_min_gens(SyzygyMatrix(tuple(cols), f.nvars, f.nvars), MonomialOrder.local(f.nvars))


def _koszul_homology(f: Polynomial):
    """Cycles, boundaries and an annihilator corner for H_1 at the origin.

    I_f kills H_1, so m^D kills it as soon as m^D ⊆ I_f.
    """
    order = MonomialOrder.local(f.nvars)
    gens = _extended(f)
    corner = corner_degree(tjurina_ideal(f, order).basis)
    if corner is None:
        raise NotFiniteLength(f"the singularity of {f} at the origin is not isolated")
    Z = syzygies(gens, MonomialOrder.global_(f.nvars))
    return Z, koszul_boundaries(gens), order, corner


def essential_min_gens(f: Polynomial) -> int:
    """Minimal number of generators at the origin of Derlog(f) modulo the
    Koszul derivations (equivalently of the first Koszul homology).  Raises
    NotFiniteLength for a non-isolated singularity."""
    Z, B, order, corner = _koszul_homology(f)
    return min_gens_finite_length(Z, B, order, corner)


def h1_length(f: Polynomial):
    """Length of the first Koszul homology of (f, f_x1, ..., f_xn) at the origin."""
    Z, B, order, corner = _koszul_homology(f)
    return quotient_length(Z, B, order, corner)


def global_quasihomogeneity_test(f: Polynomial) -> bool:
    """I_f == J_f in the polynomial ring, after checking that the singular
    locus of V(f) is finite."""
    order = MonomialOrder.global_(f.nvars)
    I = tjurina_ideal(f, order)
    if I.colength() is INFINITE:
        raise NotIsolatedGlobally(f"the singular locus of V({f}) is not finite")
    return ideal_equal(I, jacobian_ideal(f, order))


def verify_euler_splitting(f: Polynomial) -> bool:
    """Derlog(f) is generated by the syzygies of the gradient together with
    the Euler derivation, and the two parts meet only in 0."""
    if not f or not f.is_homogeneous() or f.degree() < 1:
        raise NonHomogeneousInput(f"{f} is not homogeneous of positive degree")
    n = f.nvars
    order = MonomialOrder.global_(n)
    grad = f.gradient()
    nonzero = [i for i, g in enumerate(grad) if g]
    zero = Polynomial.zero(n)
    split = []
    if nonzero:
        S = syzygies([grad[i] for i in nonzero], order)
        for col in S.columns:
            coeffs = [zero] * n
            for k, i in enumerate(nonzero):
                coeffs[i] = col[k]
            split.append(Derivation(coeffs))
    for i in range(n):
        if not grad[i]:
            coeffs = [zero] * n
            coeffs[i] = Polynomial.constant(1, n)
            split.append(Derivation(coeffs))
    euler = euler_derivation(n)
    # directness: the syzygy part kills f, the Euler field does not
    if any(d.apply(f) for d in split):
        return False
    if euler.apply(f) != f.scale(f.degree()):
        return False
    full = derlog_generators(f)
    A = _as_matrix(split + [euler], n)
    B = _as_matrix(full, n)
    return all(module_membership(d.coeffs, B, order) for d in split + [euler]) and all(
        module_membership(d.coeffs, A, order) for d in full
    )


@dataclass(frozen=True)
class DerlogPresentation:
    derlog_gens: tuple
    koszul_gens: tuple
    essential_min_gens: int


def derlog_presentation(f: Polynomial) -> DerlogPresentation:
    gens = derlog_generators(f)
    koszul = koszul_derivations(f)
    M = _as_matrix(gens, f.nvars)
    order = MonomialOrder.global_(f.nvars)
    if not all(module_membership(k.coeffs, M, order) for k in koszul):
        raise AssertionError("a Koszul derivation is missing from the Derlog span")
    return DerlogPresentation(tuple(gens), tuple(koszul), essential_min_gens(f))
