"""Submodules of free modules: standard bases, membership, syzygies, Koszul
boundaries, and generator counts / lengths of finite-length subquotients.

A module element is a tuple of Polynomials (its coordinates).  A
``SyzygyMatrix`` stores generators of a submodule as columns; when built by
:func:`syzygies` it also records the generators the columns are relations of.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from gmpy2 import mpq

from .errors import ArityMismatch, NotFiniteLength
from .poly import MonomialOrder, Polynomial
from .stdbasis import INFINITE, LeadingIdeal, colength, engine_for

ModuleElement = tuple  # tuple[Polynomial, ...]


def as_element(v) -> ModuleElement:
    """Polynomials are treated as elements of the rank-one free module."""
    if isinstance(v, Polynomial):
        return (v,)
    return tuple(v)


@dataclass(frozen=True)
class SyzygyMatrix:
    """Columns generating a submodule of R^rank.

    If ``target_gens`` is set, every column ``a`` satisfies
    ``sum(a[i] * target_gens[i]) == 0``.
    """

    columns: tuple
    rank: int
    nvars: int
    target_gens: tuple | None = None

    def __post_init__(self):
        cols = tuple(as_element(c) for c in self.columns)
        for c in cols:
            if len(c) != self.rank:
                raise ArityMismatch(f"column of length {len(c)} in a module of rank {self.rank}")
            for p in c:
                if p.nvars != self.nvars:
                    raise ArityMismatch("column entries in a different number of variables")
        object.__setattr__(self, "columns", cols)
        if self.target_gens is not None:
            object.__setattr__(self, "target_gens", tuple(as_element(g) for g in self.target_gens))

    @classmethod
    def from_columns(cls, columns, rank: int | None = None, nvars: int | None = None, target_gens=None):
        columns = [as_element(c) for c in columns]
        if rank is None:
            rank = len(columns[0])
        if nvars is None:
            nvars = columns[0][0].nvars
        return cls(tuple(columns), rank, nvars, target_gens)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Polynomial]], target_gens=None):
        """Build from a displayed matrix given row by row."""
        ncols = len(rows[0])
        columns = [tuple(row[j] for row in rows) for j in range(ncols)]
        return cls.from_columns(columns, len(rows), rows[0][0].nvars, target_gens)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def rows(self) -> list:
        return [[c[i] for c in self.columns] for i in range(self.rank)]

    def check_relations(self) -> bool:
        """Every column annihilates the target generators exactly."""
        if self.target_gens is None:
            raise ValueError("matrix has no target generators")
        for col in self.columns:
            if any(combine(col, self.target_gens)):
                return False
        return True


def combine(coeffs: Sequence[Polynomial], elements: Sequence[ModuleElement]) -> ModuleElement:
    """sum(coeffs[j] * elements[j]) as a module element."""
    rank = len(elements[0])
    nvars = coeffs[0].nvars
    out = [Polynomial.zero(nvars)] * rank
    for a, e in zip(coeffs, elements):
        if not a:
            continue
        for i in range(rank):
            if e[i]:
                out[i] = out[i] + a * e[i]
    return tuple(out)


# -- module standard bases -----------------------------------------------


@dataclass(frozen=True)
class ModuleBasis:
    """Standard basis of a submodule of R^rank under the term-over-position
    extension of ``ord``."""

    rank: int
    ord: MonomialOrder
    _vecs: tuple = field(repr=False)
    corner: int | None = None

    @property
    def elements(self) -> list:
        eng = engine_for(self.ord, self.rank)
        return [eng.to_polys(v.terms) for v in self._vecs]

    def leading_monomials(self) -> list:
        """Leading terms as (component, exponents)."""
        eng = engine_for(self.ord, self.rank)
        return [(eng.comp(v.lm), eng.exps(v.lm)) for v in self._vecs]

    def contains(self, v) -> bool:
        v = as_element(v)
        if len(v) != self.rank:
            raise ArityMismatch(f"element of length {len(v)} in a module of rank {self.rank}")
        if self.ord.is_local and self.corner is None:
            return _local_member(v, self.elements)
        eng = engine_for(self.ord, self.rank)
        terms = eng.from_polys(v)
        return not terms or eng.is_member(terms, self._vecs, self.corner)

    def colength(self):
        """Length of R^rank / M: sum of per-component colengths of the leading module."""
        by_comp = {c: [] for c in range(self.rank)}
        for c, e in self.leading_monomials():
            by_comp[c].append(e)
        total = 0
        for c in range(self.rank):
            n = colength(LeadingIdeal(tuple(by_comp[c]), self.ord.nvars))
            if n is INFINITE:
                return INFINITE
            total += n
        return total


def module_std(columns: Sequence, rank: int, order: MonomialOrder, corner: int | None = None) -> ModuleBasis:
    """Standard basis of the span of ``columns``.  ``corner`` (local order
    only) certifies m^corner * R^rank ⊆ span and enables truncation."""
    if corner is not None and not order.is_local:
        raise ValueError("highest-corner reduction needs the local order")
    eng = engine_for(order, rank)
    gens = []
    for c in columns:
        c = as_element(c)
        if len(c) != rank:
            raise ArityMismatch(f"element of length {len(c)} in a module of rank {rank}")
        terms = eng.from_polys(c)
        if terms:
            gens.append(terms)
    return ModuleBasis(rank, order, tuple(eng.std(gens, corner=corner)), corner)


def _basis_of(M, order: MonomialOrder) -> ModuleBasis:
    if isinstance(M, ModuleBasis):
        if M.ord != order:
            raise ArityMismatch("module basis was computed under a different order")
        return M
    return module_std(M.columns, M.rank, order)


def _local_member(v: ModuleElement, columns: Sequence) -> bool:
    """Membership in the localization at the origin without a normal form.

    v lies in the local span iff u*v lies in the polynomial span for some u
    with u(0) != 0, i.e. iff the polynomial colon ideal (span : v) has a
    generator with nonzero constant term.  Mora's normal form can take
    astronomically many steps when a basis element has a unit leading term,
    while the polynomial relations are cheap.
    """
    if not any(v):
        return True
    columns = [as_element(c) for c in columns if any(as_element(c))]
    if not columns:
        return False
    Z = syzygies([v] + columns, MonomialOrder.global_(v[0].nvars))
    return any(c[0].constant_part() for c in Z.columns)


def module_membership(v, M, order: MonomialOrder) -> bool:
    """True iff v lies in the span of M's columns over the ring of ``order``."""
    if order.is_local and isinstance(M, SyzygyMatrix):
        v = as_element(v)
        if len(v) != M.rank:
            raise ArityMismatch(f"element of length {len(v)} in a module of rank {M.rank}")
        return _local_member(v, M.columns)
    return _basis_of(M, order).contains(v)


def module_equal(M1, M2, order: MonomialOrder) -> bool:
    if order.is_local and isinstance(M1, SyzygyMatrix) and isinstance(M2, SyzygyMatrix):
        return all(module_membership(c, M2, order) for c in M1.columns) and all(
            module_membership(c, M1, order) for c in M2.columns
        )
    B1, B2 = _basis_of(M1, order), _basis_of(M2, order)
    return all(B2.contains(c) for c in B1.elements) and all(B1.contains(c) for c in B2.elements)


# -- syzygies ----------------------------------------------------------------


def syzygies(gens: Sequence, order: MonomialOrder) -> SyzygyMatrix:
    """Generators of the first syzygy module of ``gens`` (polynomials or
    module elements) over the ring of ``order``.

    The module spanned by (g_i, e_i) in R^rank + R^m is completed under an
    order that eliminates the first block; the elements left with zero first
    block are exactly the relations.  The inputs are polynomial, so the
    elimination always runs in the polynomial ring: localization is exact and
    the polynomial relations generate the local ones.
    """
    gens = [as_element(g) for g in gens]
    if not gens:
        raise ValueError("no generators")
    rank = len(gens[0])
    m = len(gens)
    nvars = gens[0][0].nvars
    if any(len(g) != rank for g in gens):
        raise ArityMismatch("generators of different lengths")
    eng = engine_for(MonomialOrder.global_(nvars), rank + m, top=tuple(range(rank)))
    zero = (0,) * nvars
    aug = []
    for i, g in enumerate(gens):
        terms = eng.from_polys(g)
        terms[eng.pack(zero, rank + i)] = mpq(1)
        aug.append(terms)
    basis = eng.std(aug)
    cols = []
    for v in basis:
        if eng.comp(v.lm) >= rank:
            cols.append(eng.to_polys(v.terms, range(rank, rank + m)))
    M = SyzygyMatrix(tuple(cols), m, nvars, tuple(gens))
    if not M.check_relations():
        raise AssertionError("syzygy column does not annihilate its generators")
    return M


def koszul_boundaries(gens: Sequence[Polynomial]) -> SyzygyMatrix:
    """Columns g_i e_j - g_j e_i for i < j."""
    gens = list(gens)
    m = len(gens)
    nvars = gens[0].nvars
    zero = Polynomial.zero(nvars)
    cols = []
    for i, j in combinations(range(m), 2):
        col = [zero] * m
        col[j] = gens[i]
        col[i] = -gens[j]
        cols.append(tuple(col))
    return SyzygyMatrix(tuple(cols), m, nvars, tuple((g,) for g in gens))


# -- finite-length subquotients -------------------------------------------


def relative_presentation(num: SyzygyMatrix, den: SyzygyMatrix, order: MonomialOrder | None = None) -> SyzygyMatrix:
    """K = {a in R^p : sum a_j num_j in span(den)}, so span(num)/span(den) = R^p/K.

    The columns are polynomial, so K is computed over the polynomial ring;
    localization is exact, hence the same generators serve the local ring.
    ``order`` is accepted for symmetry with the other entry points.
    """
    if num.rank != den.rank:
        raise ArityMismatch(f"modules of rank {num.rank} and {den.rank}")
    p = num.ncols
    gens = list(num.columns) + list(den.columns)
    if not gens:
        raise ValueError("empty modules")
    if p == 0:
        return SyzygyMatrix((), 0, num.nvars)
    syz = syzygies(gens, MonomialOrder.global_(num.nvars))
    cols = [c[:p] for c in syz.columns if any(c[:p])]
    return SyzygyMatrix(tuple(cols), p, num.nvars)


def quotient_length(num: SyzygyMatrix, den: SyzygyMatrix, order: MonomialOrder, corner: int | None = None):
    """Length of span(num)/span(den) (den inside num), or INFINITE.

    ``corner``: a degree D with m^D annihilating the quotient (local order).
    """
    K = relative_presentation(num, den, order)
    if K.rank == 0:
        return 0
    return module_std(K.columns, K.rank, order, corner).colength()


def min_gens_finite_length(
    num: SyzygyMatrix, den: SyzygyMatrix, order: MonomialOrder, corner: int | None = None
) -> int:
    """Minimal number of generators of span(num)/span(den) over the local ring,
    i.e. dim_k N/(B + mN).  Raises NotFiniteLength if the quotient is not of
    finite length."""
    if not order.is_local:
        raise ValueError("generator counts are taken over the local ring")
    K = relative_presentation(num, den, order)
    p = K.rank
    if p == 0:
        return 0
    if corner is None and module_std(K.columns, p, order).colength() is INFINITE:
        raise NotFiniteLength("quotient module does not have finite length")
    return p - rational_rank(evaluate_at_zero(K))


def local_min_gens(M: SyzygyMatrix, order: MonomialOrder) -> int:
    """nu(M) = dim_k M/mM over the local ring (no finite-length requirement)."""
    if not order.is_local:
        raise ValueError("generator counts are taken over the local ring")
    p = M.ncols
    if p == 0:
        return 0
    # polynomial relations localize to the local relations
    K = syzygies(M.columns, MonomialOrder.global_(M.nvars))
    return p - rational_rank(evaluate_at_zero(K))


def minimalize_columns(M: SyzygyMatrix, order: MonomialOrder) -> SyzygyMatrix:
    """Drop, front to back, every column lying in the span of the remaining ones."""
    cols = [c for c in M.columns if any(c)]
    i = 0
    while i < len(cols):
        others = cols[:i] + cols[i + 1:]
        if others and module_membership(cols[i], SyzygyMatrix(tuple(others), M.rank, M.nvars), order):
            cols = others
        else:
            i += 1
    return SyzygyMatrix(tuple(cols), M.rank, M.nvars, M.target_gens)


# -- constant matrices --------------------------------------------------------


def evaluate_at_zero(M: SyzygyMatrix) -> list:
    """rank x ncols matrix of constant parts of the entries."""
    return [[c[i].constant_part() for c in M.columns] for i in range(M.rank)]


def rational_rank(matrix: Sequence[Sequence]) -> int:
    """Exact rank, by fraction-free (Bareiss) elimination on an integer matrix."""
    rows = []
    for row in matrix:
        row = [mpq(v) if not isinstance(v, Fraction) else mpq(v.numerator, v.denominator) for v in row]
        if not row:
            continue
        den = 1
        for v in row:
            den = den * v.denominator // _gcd(den, v.denominator)
        rows.append([int(v * den) for v in row])
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            a = rows[r][col]
            rows[r] = [(p * rows[r][k] - a * rows[rank][k]) // prev for k in range(ncols)]
        prev = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
