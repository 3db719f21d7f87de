"""Ideal arithmetic in Q[x] or in its localization at the origin."""

from __future__ import annotations

from typing import Sequence

from .errors import ArityMismatch, PowerCapExceeded, ZeroDivisorInput
from .poly import MonomialOrder, Polynomial, ensure_same_arity
from .stdbasis import StandardBasis, corner_degree, engine_for, is_member, local_colength as _colength, std_basis
from .syzygy import syzygies

DEFAULT_POWER_CAP = 8


class Ideal:
    """An ideal given by generators, with its standard basis computed up front.

    ``gens`` keeps the caller's generators; ``basis.gens`` is the minimal
    standard basis and is what products and powers multiply.
    """

    __slots__ = ("gens", "ord", "basis")

    def __init__(
        self,
        gens: Sequence[Polynomial],
        order: MonomialOrder,
        basis: StandardBasis | None = None,
        corner: int | None = None,
    ):
        gens = tuple(gens)
        if gens and ensure_same_arity(gens) != order.nvars:
            raise ArityMismatch(f"generators in {gens[0].nvars} variables, order on {order.nvars}")
        self.gens = gens
        self.ord = order
        self.basis = basis if basis is not None else std_basis(gens, order, corner=corner)
        if basis is not None and not all(is_member(g, basis) for g in gens):
            raise ValueError("cached basis does not contain the generators")

    @property
    def nvars(self) -> int:
        return self.ord.nvars

    @property
    def minimal_gens(self) -> tuple:
        return self.basis.gens

    def is_zero(self) -> bool:
        return not self.basis.gens

    def is_unit(self) -> bool:
        eng = engine_for(self.ord)
        return any(eng.deg(v.lm) == 0 for v in self.basis._vecs)

    def __contains__(self, f: Polynomial) -> bool:
        return is_member(f, self.basis)

    def contains(self, f: Polynomial) -> bool:
        return is_member(f, self.basis)

    def colength(self):
        return _colength(self.basis)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]}, {self.ord.kind})"


def _same_ring(I: Ideal, J: Ideal):
    if I.ord != J.ord:
        raise ArityMismatch(f"ideals under different orders ({I.ord} vs {J.ord})")


def unit_ideal(order: MonomialOrder) -> Ideal:
    return Ideal([Polynomial.constant(1, order.nvars)], order)


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.gens + J.gens, I.ord)


def _products(A: Sequence[Polynomial], B: Sequence[Polynomial]) -> list:
    out = []
    seen = set()
    for a in A:
        for b in B:
            p = a * b
            if p and p not in seen:
                seen.add(p)
                out.append(p)
    return out


def _product_corner(I: Ideal, J: Ideal):
    # m^a ⊆ I and m^b ⊆ J give m^(a+b) ⊆ IJ
    a, b = corner_degree(I.basis), corner_degree(J.basis)
    if a is None or b is None:
        return None
    return a + b


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(_products(I.minimal_gens, J.minimal_gens), I.ord, corner=_product_corner(I, J))


def ideal_power(I: Ideal, k: int, cap: int = DEFAULT_POWER_CAP) -> Ideal:
    if k < 1:
        raise ValueError("power must be positive")
    if k > cap:
        raise PowerCapExceeded(f"power {k} exceeds cap {cap}")
    result = I
    for _ in range(k - 1):
        result = Ideal(_products(result.minimal_gens, I.minimal_gens), I.ord, corner=_product_corner(result, I))
    return result


def _relation_order(order: MonomialOrder) -> MonomialOrder:
    # Relations among polynomials are computed in the polynomial ring; colon
    # ideals and intersections commute with localization, so the same
    # generators serve the local ring, where elimination is far slower.
    return MonomialOrder.global_(order.nvars)


def _relation_gens(I: Ideal) -> list:
    # The caller's generators span the same local ideal and are usually far
    # sparser than a local basis, whose tails run up to the corner degree.
    return [g for g in I.gens if g]


def colon_element(I: Ideal, f: Polynomial) -> Ideal:
    """I : f, read off the first coordinates of the syzygies of (f, I)."""
    if not f:
        raise ZeroDivisorInput("colon by the zero polynomial")
    if f.nvars != I.nvars:
        raise ArityMismatch("polynomial and ideal in different numbers of variables")
    gens = [f] + _relation_gens(I)
    Z = syzygies(gens, _relation_order(I.ord))
    # I : f contains I
    return Ideal([c[0] for c in Z.columns if c[0]], I.ord, corner=corner_degree(I.basis))


def intersection(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J from the syzygies of the concatenated generator lists."""
    _same_ring(I, J)
    A, B = _relation_gens(I), _relation_gens(J)
    if not A or not B:
        return Ideal([], I.ord)
    Z = syzygies(A + B, _relation_order(I.ord))
    gens = []
    for col in Z.columns:
        p = Polynomial.zero(I.nvars)
        for a, g in zip(col[: len(A)], A):
            if a:
                p = p + a * g
        if p:
            gens.append(p)
    a, b = corner_degree(I.basis), corner_degree(J.basis)
    corner = None if a is None or b is None else max(a, b)
    return Ideal(gens, I.ord, corner=corner)


def colon_ideal(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    gens = [g for g in J.minimal_gens if g]
    if not gens:
        raise ZeroDivisorInput("colon by the zero ideal")
    result = colon_element(I, gens[0])
    for g in gens[1:]:
        result = intersection(result, colon_element(I, g))
    return result


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """True iff J ⊆ I."""
    _same_ring(I, J)
    return all(is_member(g, I.basis) for g in J.gens)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    return ideal_contains(I, J) and ideal_contains(J, I)


def local_colength(I: Ideal):
    if not I.ord.is_local:
        raise ValueError("local colength needs the local order")
    return I.colength()
