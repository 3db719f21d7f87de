"""Independent truncated-jet oracle built on sympy.

For an ideal I of the local ring with m^D ⊆ I, R/I = k[x]/(I + m^D) and the
image of I in k[x]/m^D is spanned by the monomial multiples of its
generators, truncated below degree D.  Lengths are then ranks of rational
matrices.  D is unknown in advance, so callers raise it until two
consecutive values agree (the sequence is non-increasing in D only once
m^D ⊆ I, but it is constant from that point on).
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import sympy


def monomials_below(n: int, D: int) -> list:
    out = []
    for d in range(D):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _poly_terms(p, gens):
    return {m: c for m, c in sympy.Poly(p, *gens).terms()}


def _span_rows(polys, gens, D, index):
    n = len(gens)
    rows = []
    for p in polys:
        terms = _poly_terms(p, gens)
        if not terms:
            continue
        low = min(sum(m) for m in terms)
        for mono in monomials_below(n, max(D - low, 0)):
            row = {}
            for m, c in terms.items():
                e = tuple(a + b for a, b in zip(m, mono))
                if sum(e) < D:
                    row[index[e]] = c
            if row:
                rows.append(row)
    return rows


def _rank(rows, ncols):
    if not rows:
        return 0
    M = sympy.zeros(len(rows), ncols)
    for i, row in enumerate(rows):
        for j, c in row.items():
            M[i, j] = c
    return M.rank()


def jet_colength(polys, gens, D: int) -> int:
    """dim_k k[x]/(<polys> + m^D)."""
    basis = monomials_below(len(gens), D)
    index = {m: i for i, m in enumerate(basis)}
    return len(basis) - _rank(_span_rows(polys, gens, D, index), len(basis))


def stable_colength(polys, gens, start: int = 2, limit: int = 30) -> int:
    prev = None
    for D in range(start, limit):
        v = jet_colength(polys, gens, D)
        if v == prev:
            return v
        prev = v
    raise RuntimeError("colength did not stabilize; ideal may not be m-primary")


def jet_colon_colength(big, small, gens, D: int) -> int:
    """dim_k R/(<big> : <small>), assuming m^D ⊆ <big>."""
    n = len(gens)
    basis = monomials_below(n, D)
    index = {m: i for i, m in enumerate(basis)}
    big_rows = _span_rows(big, gens, D, index)
    # quotient space k[x]/(big + m^D): pick complement coordinates
    N = len(basis)
    M = sympy.zeros(len(big_rows), N)
    for i, row in enumerate(big_rows):
        for j, c in row.items():
            M[i, j] = c
    rref, pivots = M.rref()
    pivots = list(pivots)
    free = [j for j in range(N) if j not in pivots]

    def reduce(vec):
        vec = list(vec)
        for r, pc in enumerate(pivots):
            if vec[pc]:
                a = vec[pc]
                for j in range(N):
                    vec[j] -= a * rref[r, j]
        return [vec[j] for j in free]

    # linear map h -> (h*g mod big) for each g, on h in basis
    cols = []
    for m in basis:
        image = []
        for g in small:
            vec = [0] * N
            for e, c in _poly_terms(g, gens).items():
                t = tuple(a + b for a, b in zip(e, m))
                if sum(t) < D:
                    vec[index[t]] += c
            image.extend(reduce(vec))
        cols.append(image)
    A = sympy.Matrix(cols).T if cols and cols[0] else sympy.zeros(1, N)
    return A.rank()
