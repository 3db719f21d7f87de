"""Standard bases over Q[x] and over its localization at the origin.

One engine serves both rings.  Under the global degrevlex order it is plain
Buchberger with the division algorithm; under the local negdegrevlex order
the normal form is Mora's (ecart-driven, with the set of reducers growing by
intermediate remainders), so ``r == 0`` certifies membership in the
localization.

Internally a term ``x^a * e_c`` of a free module is packed into one integer
laid out (high to low) as ``[block | deg | a_n | ... | a_1 | c]`` in 16-bit
fields.  Multiplying by a monomial is integer addition, and the order key for
both orders is the affine map ``2 * (t & mask) - t``.  A component may be put
in a higher block, which ranks all of its terms above every term of the lower
block; syzygies are computed by eliminating such a block.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from gmpy2 import mpq

from .errors import ArityMismatch
from .poly import MonomialOrder, Polynomial, ensure_same_arity

_W = 16
_FMASK = (1 << _W) - 1
_MAX_EXP = (1 << (_W - 1)) - 1


class _Infinite:
    """Length of a module that is not of finite length."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def is_finite(length) -> bool:
    return length is not INFINITE


class _Vec:
    __slots__ = ("terms", "lm", "lc", "ecart")

    def __init__(self, terms, lm, lc, ecart):
        self.terms = terms
        self.lm = lm
        self.lc = lc
        self.ecart = ecart


class Engine:
    """Term packing, order and reduction for one (ring, module rank, order) setting.

    ``top`` lists the components placed in the upper block (eliminated first).
    """

    def __init__(self, nvars: int, local: bool, ncomps: int = 1, top: tuple = ()):
        if ncomps >= 1 << _W:
            raise ValueError("too many module components")
        self.nvars = nvars
        self.local = local
        self.ncomps = ncomps
        self.top = frozenset(top)
        self.deg_shift = _W * (nvars + 1)
        self.block_shift = _W * (nvars + 2)
        self.exp_mask = ((1 << (_W * nvars)) - 1) << _W
        self.guard = sum(1 << (_W * (i + 1) + _W - 1) for i in range(nvars))
        block_mask = _FMASK << self.block_shift
        deg_mask = _FMASK << self.deg_shift
        self.key_mask = block_mask if local else block_mask | deg_mask
        # block orders can have ecart > 0 even for the global order
        self.track_ecart = local or bool(self.top)
        km = self.key_mask
        self.key = lambda t: 2 * (t & km) - t

    # -- packing ----------------------------------------------------------

    def pack(self, exps: Sequence[int], comp: int = 0) -> int:
        deg = 0
        t = comp
        for i, e in enumerate(exps):
            if e > _MAX_EXP:
                raise OverflowError(f"exponent {e} too large")
            t |= e << (_W * (i + 1))
            deg += e
        t |= deg << self.deg_shift
        if comp in self.top:
            t |= 1 << self.block_shift
        return t

    def monomial(self, exps: Sequence[int]) -> int:
        """A multiplier: component 0, block 0."""
        t = 0
        deg = 0
        for i, e in enumerate(exps):
            t |= e << (_W * (i + 1))
            deg += e
        return t | (deg << self.deg_shift)

    def exps(self, t: int) -> tuple:
        return tuple((t >> (_W * (i + 1))) & _FMASK for i in range(self.nvars))

    def comp(self, t: int) -> int:
        return t & _FMASK

    def deg(self, t: int) -> int:
        return (t >> self.deg_shift) & _FMASK

    def divides(self, b: int, a: int) -> bool:
        """True if term b divides term a (same component)."""
        if (a ^ b) & _FMASK:
            return False
        em = self.exp_mask
        g = self.guard
        return (((a & em) | g) - (b & em)) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.exps(a), self.exps(b)
        return self.pack([max(x, y) for x, y in zip(ea, eb)], a & _FMASK)

    def coprime(self, a: int, b: int) -> bool:
        return all(x == 0 or y == 0 for x, y in zip(self.exps(a), self.exps(b)))

    # -- conversion -------------------------------------------------------

    def from_polys(self, coords: Sequence[Polynomial], offset: int = 0) -> dict:
        terms = {}
        for c, p in enumerate(coords):
            for exps, coeff in p._terms.items():
                terms[self.pack(exps, c + offset)] = coeff
        return terms

    def to_polys(self, terms: dict, comps: range | None = None) -> tuple:
        comps = comps if comps is not None else range(self.ncomps)
        out = {c: {} for c in comps}
        for t, coeff in terms.items():
            c = t & _FMASK
            if c in out:
                out[c][self.exps(t)] = coeff
        return tuple(Polynomial._raw(out[c], self.nvars) for c in comps)

    # -- vectors ----------------------------------------------------------

    def make(self, terms: dict):
        if not terms:
            return None
        lm = max(terms, key=self.key)
        ecart = 0
        if self.track_ecart:
            ds = self.deg_shift
            ecart = max((t >> ds) & _FMASK for t in terms) - ((lm >> ds) & _FMASK)
        return _Vec(terms, lm, terms[lm], ecart)

    def monic(self, v: _Vec) -> _Vec:
        if v.lc == 1:
            return v
        inv = 1 / v.lc
        return _Vec({t: c * inv for t, c in v.terms.items()}, v.lm, mpq(1), v.ecart)

    def _reduce(self, h: _Vec, g: _Vec) -> dict:
        """h - (lc(h)/lc(g)) * (lm(h)/lm(g)) * g; cancels the leading term of h."""
        q = h.lc / g.lc
        shift = h.lm - g.lm
        new = dict(h.terms)
        for t, c in g.terms.items():
            m = t + shift
            v = new.get(m)
            if v is None:
                new[m] = -q * c
            else:
                v = v - q * c
                if v:
                    new[m] = v
                else:
                    del new[m]
        new.pop(h.lm, None)
        return new

    def _find_reducer(self, lm: int, reducers) -> _Vec | None:
        best = None
        for g in reducers:
            if self.divides(g.lm, lm):
                if best is None or g.ecart < best.ecart:
                    best = g
                    if not g.ecart:
                        break
        return best

    def cut(self, terms: dict, corner: int) -> dict:
        """Drop terms of degree >= corner (they lie in m^corner)."""
        ds = self.deg_shift
        return {t: c for t, c in terms.items() if ((t >> ds) & _FMASK) < corner}

    def weak_nf(self, terms: dict, basis: Sequence[_Vec], corner: int | None = None):
        """Mora normal form.  Returns a _Vec whose leading term is not divisible
        by any leading term of ``basis``, or None for zero.

        ``corner`` asserts that m^corner lies in the module, so terms of that
        degree or higher may be discarded at every step.
        """
        if corner is not None:
            terms = self.cut(terms, corner)
        h = self.make(terms)
        if h is None:
            return None
        reducers = list(basis)
        local = self.local
        while True:
            g = self._find_reducer(h.lm, reducers)
            if g is None:
                return h
            if local and g.ecart > h.ecart:
                reducers.append(h)
            new = self._reduce(h, g)
            if corner is not None:
                new = self.cut(new, corner)
            h = self.make(new)
            if h is None:
                return None

    def full_nf(self, terms: dict, basis: Sequence[_Vec]) -> dict:
        """Fully reduced remainder; only meaningful for global orders."""
        if self.local:
            raise ValueError("full reduction requires a global order")
        rem = {}
        h = self.make(terms)
        while h is not None:
            g = self._find_reducer(h.lm, basis)
            if g is None:
                rem[h.lm] = h.lc
                rest = dict(h.terms)
                del rest[h.lm]
                h = self.make(rest)
            else:
                h = self.make(self._reduce(h, g))
        return rem

    def spoly(self, f: _Vec, g: _Vec, lcm: int) -> dict:
        sf = lcm - f.lm
        sg = lcm - g.lm
        qf = 1 / f.lc
        qg = 1 / g.lc
        new = {}
        for t, c in f.terms.items():
            new[t + sf] = c * qf
        for t, c in g.terms.items():
            m = t + sg
            v = new.get(m, 0) - c * qg
            if v:
                new[m] = v
            else:
                new.pop(m, None)
        return new

    # -- completion -------------------------------------------------------

    def _pair_key(self, f: _Vec, g: _Vec, lcm: int, i: int, j: int):
        if self.local:
            sugar = self.deg(lcm) + max(f.ecart, g.ecart)
            return (sugar, self.deg(lcm), j, i)
        return (self.key(lcm), j, i)

    def std(self, gens: Sequence[dict], basis: Sequence[_Vec] = (), corner: int | None = None) -> list:
        """Standard basis of the module generated by ``basis`` (already a
        standard basis) and ``gens``.  Returns a minimal basis, leading
        coefficients 1.

        With ``corner`` the caller certifies that m^corner * R^ncomps lies in
        the module; all terms of that degree or higher are discarded and the
        monomial vectors of that degree are added to the result.  The module
        is unchanged.
        Not available with elimination blocks.
        """
        S: list = [self.monic(v) for v in basis]
        if corner is not None and self.top:
            raise ValueError("highest-corner reduction cannot be combined with elimination")
        pending: set = set()
        heap: list = []

        def add(v: _Vec):
            j = len(S)
            S.append(v)
            for i in range(j):
                f = S[i]
                if (f.lm ^ v.lm) & _FMASK:
                    continue
                # product criterion: valid for ideals only
                if self.ncomps == 1 and self.coprime(f.lm, v.lm):
                    continue
                lcm = self.lcm(f.lm, v.lm)
                pending.add((i, j))
                heapq.heappush(heap, (self._pair_key(f, v, lcm, i, j), i, j, lcm))

        for terms in gens:
            v = self.weak_nf(terms, S, corner) if S else self.make(dict(terms))
            if v is not None:
                add(self.monic(v))

        while heap:
            _, i, j, lcm = heapq.heappop(heap)
            pending.discard((i, j))
            if self._chain_skip(S, pending, i, j, lcm):
                continue
            h = self.weak_nf(self.spoly(S[i], S[j], lcm), S, corner)
            if h is not None:
                add(self.monic(h))
        if corner is not None:
            # Every pair with a degree-corner monomial reduces to 0 after the
            # cut, so they only need to join the final leading module.
            for comp in range(self.ncomps):
                for exps in _monomials_of_degree(self.nvars, corner):
                    t = self.pack(exps, comp)
                    if not any(self.divides(v.lm, t) for v in S):
                        S.append(_Vec({t: mpq(1)}, t, mpq(1), 0))
        return self.minimalize(S)

    def _chain_skip(self, S, pending, i, j, lcm) -> bool:
        for k, g in enumerate(S):
            if k == i or k == j:
                continue
            if not self.divides(g.lm, lcm):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            return True
        return False

    def minimalize(self, S: Sequence[_Vec]) -> list:
        keep = []
        for idx, v in enumerate(S):
            redundant = False
            for jdx, w in enumerate(S):
                if jdx == idx or not self.divides(w.lm, v.lm):
                    continue
                # equal leading terms: keep the earliest
                if w.lm != v.lm or jdx < idx:
                    redundant = True
                    break
            if not redundant:
                keep.append(v)
        keep.sort(key=lambda v: self.key(v.lm), reverse=True)
        return keep

    def reduce_basis(self, S: Sequence[_Vec]) -> list:
        """Tail-reduce a minimal basis (global orders only)."""
        out = []
        for idx, v in enumerate(S):
            others = [w for jdx, w in enumerate(S) if jdx != idx]
            tail = dict(v.terms)
            del tail[v.lm]
            rem = self.full_nf(tail, others)
            rem[v.lm] = v.lc
            out.append(self.monic(self.make(rem)))
        return out

    def is_member(self, terms: dict, basis: Sequence[_Vec], corner: int | None = None) -> bool:
        return self.weak_nf(terms, basis, corner) is None


def _monomials_of_degree(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def get_engine(nvars: int, local: bool, ncomps: int = 1, top: tuple = ()) -> Engine:
    return Engine(nvars, local, ncomps, top)


def engine_for(order: MonomialOrder, ncomps: int = 1, top: tuple = ()) -> Engine:
    return get_engine(order.nvars, order.is_local, ncomps, tuple(sorted(top)))


# -- leading ideals and colength -----------------------------------------


@dataclass(frozen=True)
class LeadingIdeal:
    """Minimal monomial generators of a leading ideal, in ``nvars`` variables."""

    monomials: tuple
    nvars: int

    def __post_init__(self):
        mons = sorted(set(tuple(m) for m in self.monomials))
        minimal = [m for m in mons if not any(o != m and _mdivides(o, m) for o in mons)]
        object.__setattr__(self, "monomials", tuple(minimal))

    def contains(self, m) -> bool:
        return any(_mdivides(g, m) for g in self.monomials)


def _mdivides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def colength(L: LeadingIdeal):
    """Number of monomials outside L, or INFINITE."""
    n = L.nvars
    gens = L.monomials
    if any(sum(g) == 0 for g in gens):
        return 0
    for i in range(n):
        if not any(g[i] > 0 and sum(g) == g[i] for g in gens):
            return INFINITE
    count = 0
    stack = [((0,) * n, 0)]
    while stack:
        m, start = stack.pop()
        count += 1
        for i in range(start, n):
            e = list(m)
            e[i] += 1
            e = tuple(e)
            if not any(_mdivides(g, e) for g in gens):
                stack.append((e, i))
    return count


def standard_monomials(L: LeadingIdeal) -> list:
    if colength(L) is INFINITE:
        raise ValueError("infinitely many standard monomials")
    n = L.nvars
    out = []
    stack = [((0,) * n, 0)]
    if L.contains((0,) * n):
        return []
    while stack:
        m, start = stack.pop()
        out.append(m)
        for i in range(start, n):
            e = list(m)
            e[i] += 1
            e = tuple(e)
            if not L.contains(e):
                stack.append((e, i))
    return sorted(out, key=lambda m: (sum(m), m))


# -- ideal-level API -------------------------------------------------------


@dataclass(frozen=True)
class StandardBasis:
    gens: tuple
    ord: MonomialOrder
    reduced: bool = False
    _vecs: tuple = field(default=(), repr=False, compare=False)
    corner: int | None = field(default=None, compare=False)

    @property
    def nvars(self) -> int:
        return self.ord.nvars

    def contains_unit(self) -> bool:
        return any(g.is_homogeneous() and g.degree() == 0 for g in self.gens) or any(
            sum(m) == 0 for m in leading_ideal(self).monomials
        )


def _check_order(polys, order: MonomialOrder):
    if not polys:
        return
    n = ensure_same_arity(polys)
    if n != order.nvars:
        raise ArityMismatch(f"polynomials in {n} variables, order on {order.nvars}")


def std_basis(
    gens: Sequence[Polynomial], order: MonomialOrder, reduced: bool = False, corner: int | None = None
) -> StandardBasis:
    """Standard basis of the ideal generated by ``gens`` in the ring selected
    by ``order`` (polynomial ring if global, local ring at 0 if local).

    ``corner`` (local order only) is a degree D already known to satisfy
    m^D ⊆ ideal; it lets the computation discard all terms of degree >= D.
    """
    gens = list(gens)
    _check_order(gens, order)
    if corner is not None and not order.is_local:
        raise ValueError("highest-corner reduction needs the local order")
    eng = engine_for(order)
    vecs = eng.std([eng.from_polys([g]) for g in gens if g], corner=corner)
    if reduced and not order.is_local:
        vecs = eng.reduce_basis(vecs)
    return _wrap(vecs, order, reduced and not order.is_local, corner)


def _wrap(vecs, order, reduced=False, corner=None) -> StandardBasis:
    eng = engine_for(order)
    polys = tuple(eng.to_polys(v.terms)[0] for v in vecs)
    G = StandardBasis(polys, order, reduced, tuple(vecs), corner)
    if order.is_local and corner is None:
        # A finite staircase bounds the degree of every normal form, which
        # keeps Mora reduction from chasing large-ecart tails (or a unit).
        corner = corner_degree(G)
        if corner is not None:
            G = StandardBasis(polys, order, reduced, tuple(vecs), corner)
    return G


def corner_degree(I: StandardBasis) -> int | None:
    """Smallest D with m^D inside the local ideal, or None if the colength is
    infinite (or the order is global)."""
    if not I.ord.is_local:
        return None
    L = leading_ideal(I)
    if colength(L) is INFINITE:
        return None
    std = standard_monomials(L)
    return 1 + max(sum(m) for m in std) if std else 0


def weak_normal_form(f: Polynomial, G, order: MonomialOrder | None = None) -> Polynomial:
    """Mora weak normal form of f with respect to G (a StandardBasis or a
    sequence of polynomials together with ``order``).  For a global order and
    a reduced basis the remainder is fully reduced."""
    if isinstance(G, StandardBasis):
        order = order or G.ord
        if order != G.ord:
            raise ArityMismatch("order does not match the standard basis")
        vecs = G._vecs
        full = G.reduced
    else:
        if order is None:
            raise ValueError("an order is required for a plain generator list")
        G = [g for g in G if g]
        _check_order(G, order)
        eng = engine_for(order)
        vecs = [eng.monic(eng.make(eng.from_polys([g]))) for g in G]
        full = False
    _check_order([f], order)
    eng = engine_for(order)
    if _needs_relation_test(order, G) and _member_by_relations(f, G.gens if isinstance(G, StandardBasis) else G):
        return Polynomial.zero(f.nvars)
    terms = eng.from_polys([f])
    if full:
        return eng.to_polys(eng.full_nf(terms, vecs))[0]
    r = eng.weak_nf(terms, vecs, G.corner if isinstance(G, StandardBasis) else None)
    return Polynomial.zero(f.nvars) if r is None else eng.to_polys(r.terms)[0]


def is_member(f: Polynomial, I: StandardBasis) -> bool:
    _check_order([f], I.ord)
    if not f:
        return True
    if _needs_relation_test(I.ord, I):
        return _member_by_relations(f, I.gens)
    eng = engine_for(I.ord)
    return eng.is_member(eng.from_polys([f]), I._vecs, I.corner)


def _needs_relation_test(order: MonomialOrder, G) -> bool:
    # Without a finite staircase, Mora reduction of a member can run through
    # unboundedly many degrees (a unit cofactor expanded as a power series).
    return order.is_local and not (isinstance(G, StandardBasis) and G.corner is not None)


def _member_by_relations(f: Polynomial, gens) -> bool:
    from .syzygy import _local_member  # syzygy builds on this module

    return _local_member((f,), [(g,) for g in gens if g])


def leading_ideal(I: StandardBasis) -> LeadingIdeal:
    eng = engine_for(I.ord)
    return LeadingIdeal(tuple(eng.exps(v.lm) for v in I._vecs), I.nvars)


def local_colength(I: StandardBasis):
    return colength(leading_ideal(I))
