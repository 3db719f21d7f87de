"""Invariants of an isolated hypersurface singularity at the origin.

Everything here is computed in the local ring (negdegrevlex standard bases).
:class:`Singularity` caches the ideals and lengths that several invariants
share; the module-level functions are thin wrappers that build one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import comb
from typing import Sequence

from .errors import BrianconSkodaViolation, NotIsolated, PowerCapExceeded
from .ideals import (
    DEFAULT_POWER_CAP,
    Ideal,
    colon_element,
    colon_ideal,
    ideal_contains,
    ideal_equal,
    ideal_product,
)
from .poly import MonomialOrder, Polynomial, format_polynomial, q_to_fraction
from .stdbasis import INFINITE, corner_degree, is_member
from .syzygy import evaluate_at_zero, rational_rank, syzygies

QH = "QH"


def jacobian_ideal(f: Polynomial, order: MonomialOrder | None = None) -> Ideal:
    order = order or MonomialOrder.local(f.nvars)
    return Ideal([g for g in f.gradient() if g], order)


def tjurina_ideal(f: Polynomial, order: MonomialOrder | None = None) -> Ideal:
    order = order or MonomialOrder.local(f.nvars)
    return Ideal([g for g in f.gradient() + [f] if g], order)


def is_smooth_at_origin(f: Polynomial) -> bool:
    """True when the origin is not a singular point of V(f): either it is
    off the hypersurface or the gradient does not vanish there."""
    return bool(f.constant_part()) or any(g.constant_part() for g in f.gradient())


def maximal_ideal(nvars: int, order: MonomialOrder) -> Ideal:
    return Ideal([Polynomial.variable(i, nvars) for i in range(nvars)], order)


class Singularity:
    """Lazily computed data attached to one polynomial f."""

    def __init__(self, f: Polynomial, power_cap: int = DEFAULT_POWER_CAP):
        if not f:
            raise ValueError("the zero polynomial does not define a hypersurface")
        self.f = f
        self.n = f.nvars
        self.order = MonomialOrder.local(self.n)
        self.power_cap = power_cap

    # -- basic ideals and numbers -------------------------------------------

    @cached_property
    def smooth(self) -> bool:
        return is_smooth_at_origin(self.f)

    @cached_property
    def J(self) -> Ideal:
        return jacobian_ideal(self.f, self.order)

    @cached_property
    def I(self) -> Ideal:
        return tjurina_ideal(self.f, self.order)

    @cached_property
    def mu(self):
        return self.J.colength()

    @cached_property
    def tau(self):
        return self.I.colength()

    @cached_property
    def corner_J(self):
        return corner_degree(self.J.basis)

    @cached_property
    def corner_I(self):
        return corner_degree(self.I.basis)

    def require_isolated(self):
        if self.mu is INFINITE:
            raise NotIsolated(f"{self.f} has a non-isolated singularity at the origin")

    # -- quasihomogeneity ----------------------------------------------------

    @cached_property
    def saito(self) -> bool:
        self.require_isolated()
        return is_member(self.f, self.J.basis)

    @cached_property
    def syzygy_rank(self) -> int:
        """Rank at the origin of the syzygies of (f_x1, ..., f_xn, f)."""
        self.require_isolated()
        Z = syzygies(self.f.gradient() + [self.f], self.order)
        return rational_rank(evaluate_at_zero(Z))

    @cached_property
    def syzygy_rank_verdict(self) -> bool:
        return self.syzygy_rank >= 1

    @cached_property
    def min_gens_I(self) -> int:
        """nu(I_f) = dim_k I/mI."""
        self.require_isolated()
        mI = ideal_product(maximal_ideal(self.n, self.order), self.I)
        return mI.colength() - self.tau

    @cached_property
    def weights(self):
        return find_weights(self.f)

    # -- Briancon-Skoda chain ------------------------------------------------

    @cached_property
    def ebs(self) -> int:
        self.require_isolated()
        power = self.f
        for d in range(1, self.n + 1):
            if is_member(power, self.J.basis):
                return d
            power = power * self.f
        raise BrianconSkodaViolation(f"no power f^d with d <= {self.n} lies in the gradient ideal")

    def colon_power(self, i: int) -> Ideal:
        """J : f^i, built as ((J : f) : f) ... to keep the divisor small."""
        return self._colons[i]

    @cached_property
    def _colons(self) -> list:
        self.require_isolated()
        out = [self.J]
        for _ in range(self.ebs):
            out.append(colon_element(out[-1], self.f))
        return out

    def chain_ideal(self, i: int) -> Ideal:
        """<J : f^i, f>."""
        C = self.colon_power(i)
        return Ideal(C.minimal_gens + (self.f,), self.order, corner=self.corner_I)

    @cached_property
    def chain_lengths(self) -> list:
        e = self.ebs
        if e == 1:
            return [self.tau]
        out = [self.tau] + [self.chain_ideal(i).colength() for i in range(1, e - 1)]
        out.append(self.colon_power(e - 1).colength())
        return out

    @cached_property
    def beta(self):
        if self.saito:
            return QH
        e = self.ebs
        beta = 0
        for i in range(1, e):
            if ideal_contains(self.I, self.chain_ideal(i)):
                beta = i
            else:
                break
        if beta > e - 2:
            raise AssertionError(f"beta={beta} exceeds e^BS-2 for a non-quasihomogeneous input")
        return beta

    # -- lengths from products and powers --------------------------------------

    def power(self, m: int) -> Ideal:
        if m > self.power_cap:
            raise PowerCapExceeded(f"power {m} exceeds cap {self.power_cap}")
        return self._powers(m)

    def _powers(self, m: int) -> Ideal:
        cache = self.__dict__.setdefault("_power_cache", {1: self.I})
        if m not in cache:
            cache[m] = ideal_product(self._powers(m - 1), self.I)
        return cache[m]

    def power_length(self, m: int):
        self.require_isolated()
        return self.power(m).colength()

    def jacobian_times_power(self, t: int) -> Ideal:
        """J * I^t (J itself for t = 0)."""
        cache = self.__dict__.setdefault("_jpower_cache", {0: self.J})
        if t not in cache:
            cache[t] = ideal_product(self.J, self.power(t))
        return cache[t]

    @cached_property
    def ji_length(self):
        self.require_isolated()
        return self.jacobian_times_power(1).colength()

    @cached_property
    def delta_length(self) -> int:
        return self.power_length(2) - self.tau - self.n * self.tau

    @cached_property
    def i2ji_length(self) -> int:
        return self.ji_length - self.power_length(2)

    def reduction_number(self, cap: int | None = None):
        """Least t with J I^t = I^(t+1) and J I^(t+1) = I^(t+2), searched while
        t + 2 stays within the power cap."""
        self.require_isolated()
        cap = self.power_cap if cap is None else cap

        def step(t):
            # J I^t ⊆ I^(t+1), so equal lengths mean equal ideals
            return self.jacobian_times_power(t).colength() == self.power_length(t + 1)

        for t in range(0, cap - 1):
            if step(t) and step(t + 1):
                return t
        return None

    def hilbert_samuel(self, mmax: int | None = None) -> "HilbertFit":
        self.require_isolated()
        n = self.n
        mmax = n + 3 if mmax is None else mmax
        if mmax < n + 2:
            raise ValueError(f"need at least {n + 2} values to compare two windows")
        values = [self.power_length(m) for m in range(1, mmax + 1)]
        top = _fit_window(values, n, mmax - n, mmax)
        lower = _fit_window(values, n, mmax - n - 1, mmax - 1)
        return HilbertFit(top[0], top[1] if n >= 1 else 0, values, top == lower, tuple(top))

    # -- colon conditions --------------------------------------

    @cached_property
    def colon_in_tjurina(self) -> bool:
        """J : f ⊆ I_f (expected false)."""
        return ideal_contains(self.I, self.colon_power(1))

    @cached_property
    def jf2_length(self):
        self.require_isolated()
        return Ideal(self.J.minimal_gens + (self.f * self.f,), self.order, corner=self.corner_J).colength()

    @cached_property
    def square_colon_is_tjurina(self) -> bool:
        """I^2 : I == I."""
        return ideal_equal(colon_ideal(self.power(2), self.I), self.I)


def _fit_window(values: Sequence[int], n: int, lo: int, hi: int) -> list:
    """Solve for (e_0, ..., e_n) from P(t) = sum (-1)^i e_i C(t+n-1-i, n-i)
    using the values at t = lo..hi (n + 1 points, 1-based)."""
    rows = []
    for t in range(lo, hi + 1):
        rows.append([Fraction((-1) ** i * comb(t + n - 1 - i, n - i)) for i in range(n + 1)] + [Fraction(values[t - 1])])
    sol = _solve_unique(rows, n + 1)
    if sol is None:
        raise ArithmeticError("Hilbert-Samuel window is singular")
    return [int(v) if v.denominator == 1 else v for v in sol]


def _row_reduce(rows: list, ncols: int):
    """Gauss-Jordan on augmented rows in place; returns pivot columns or None
    if the system is inconsistent."""
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                a = rows[k][c]
                rows[k] = [x - a * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:ncols]) and row[ncols] for row in rows):
        return None
    return pivots


def _solve_unique(rows: list, ncols: int):
    rows = [list(r) for r in rows]
    pivots = _row_reduce(rows, ncols)
    if pivots is None or len(pivots) < ncols:
        return None
    return [rows[i][ncols] for i in range(ncols)]


@dataclass(frozen=True)
class HilbertFit:
    e0: int
    e1: int
    values: list
    stable: bool
    coefficients: tuple = ()


def find_weights(f: Polynomial):
    """Weights (r_1, ..., r_n) with sum r_i m_i = 1 on every monomial of f and
    0 < r_i <= 1/2, or None.  A result certifies quasihomogeneity in the given
    coordinates only.

    The feasible set is a polytope inside [0, 1/2]^n; its vertices are found
    by fixing each coordinate at 0, at 1/2 or leaving it free, and their
    average lies in the relative interior, so it has r_i > 0 whenever any
    feasible point does.
    """
    if not f:
        raise ValueError("the zero polynomial has no weights")
    n = f.nvars
    eqs = [[Fraction(e) for e in m] + [Fraction(1)] for m in f.support()]
    if _row_reduce([list(r) for r in eqs], n) is None:
        return None
    half = Fraction(1, 2)
    vertices = set()
    for pattern in product((None, 0, half), repeat=n):
        rows = [list(r) for r in eqs]
        for i, v in enumerate(pattern):
            if v is not None:
                rows.append([Fraction(int(j == i)) for j in range(n)] + [Fraction(v)])
        sol = _solve_unique(rows, n)
        if sol is not None and all(0 <= v <= half for v in sol):
            vertices.add(tuple(sol))
    if not vertices:
        return None
    k = len(vertices)
    centre = tuple(sum(v[i] for v in vertices) / k for i in range(n))
    if any(v <= 0 for v in centre):
        return None
    return centre


# -- module-level API ---------------------------------------------------------


def milnor_number(f: Polynomial):
    return Singularity(f).mu


def tjurina_number(f: Polynomial):
    return Singularity(f).tau


def saito_membership(f: Polynomial) -> bool:
    return Singularity(f).saito


def syzygy_rank_test(f: Polynomial) -> bool:
    return Singularity(f).syzygy_rank_verdict


def minimal_generators_count(f: Polynomial) -> int:
    """nu(I_f) in the local ring."""
    return Singularity(f).min_gens_I


def briancon_skoda_exponent(f: Polynomial) -> int:
    return Singularity(f).ebs


def beta_invariant(f: Polynomial):
    return Singularity(f).beta


def chain_lengths(f: Polynomial) -> list:
    return Singularity(f).chain_lengths


def delta_length(f: Polynomial) -> int:
    return Singularity(f).delta_length


def i2ji_length(f: Polynomial) -> int:
    return Singularity(f).i2ji_length


def reduction_number(f: Polynomial, cap: int = DEFAULT_POWER_CAP):
    return Singularity(f, power_cap=max(cap, DEFAULT_POWER_CAP)).reduction_number(cap)


def hilbert_samuel_fit(f: Polynomial, mmax: int | None = None) -> HilbertFit:
    cap = max(DEFAULT_POWER_CAP, mmax or 0)
    return Singularity(f, power_cap=cap).hilbert_samuel(mmax)


def identity_checks(f: Polynomial, with_hilbert: bool = True, with_derlog: bool = True) -> dict:
    return evaluate_identities(Singularity(f), with_hilbert, with_derlog)


# -- identity checks -------------------------------------------------------------


def invariant_bounds(mu: int, tau: int, e: int, beta: int) -> dict:
    """The four inequalities for a non-quasihomogeneous isolated singularity."""
    return {
        "beta_le_ebs_minus_2": beta <= e - 2,
        "mu_upper": mu <= e * tau - (e - beta - 1),
        "mu_lower": mu >= (beta + 1) * tau + 2 * (e - beta - 2) + 1,
        "ratio": tau < mu < e * tau,
    }


def small_difference(mu: int, tau: int, e: int, beta: int) -> bool:
    """Implications for mu - tau at most 4 (vacuous when no antecedent holds)."""
    d = mu - tau
    ok = True
    if d <= 2:
        ok &= e == 2
    if d <= e - 1:
        ok &= e == 2
    if d == 3:
        ok &= e <= 3 and ((beta, tau) == (1, 2) or beta == 0)
    if d == 4:
        ok &= e <= 3 and ((beta, e, tau) in ((1, 3, 3), (1, 3, 2)) or beta == 0)
    return ok


def evaluate_identities(S: Singularity, with_hilbert: bool = True, with_derlog: bool = True) -> dict:
    """Named boolean verdicts; None marks a check whose hypothesis fails."""
    S.require_isolated()
    mu, tau, n = S.mu, S.tau, S.n
    qh = S.saito
    out = {}
    out["quasihomogeneity_agreement"] = (
        qh == S.syzygy_rank_verdict == (mu == tau) == (S.min_gens_I == n)
        and (S.weights is None or qh)
    )
    out["ebs_bound"] = S.ebs <= n
    chain = S.chain_lengths
    out["telescoping"] = sum(chain) == mu
    ascending = chain[:-1] if len(chain) > 1 else chain
    out["chain_monotone"] = all(a >= b for a, b in zip(ascending, ascending[1:]))
    out["jacobian_product_length"] = S.ji_length == mu + n * tau
    out["mt_identity"] = mu - tau == S.i2ji_length + S.delta_length
    out["delta_zero_iff_quasihomogeneous"] = (S.delta_length == 0) == qh
    out["conjecture_colon_not_in_tjurina"] = not S.colon_in_tjurina
    squares_equal = S.i2ji_length == 0
    out["unit_difference_reduction"] = squares_equal if mu - tau == 1 else None
    if qh:
        out["chain_plateau"] = None
        out["bounds"] = None
        out["small_difference"] = None
    else:
        beta, e = S.beta, S.ebs
        out["chain_plateau"] = all(v == tau for v in chain[: beta + 1])
        out["bounds"] = all(invariant_bounds(mu, tau, e, beta).values())
        out["small_difference"] = small_difference(mu, tau, e, beta)
    out["colon_conditions_agree"] = S.colon_in_tjurina == (S.jf2_length == 2 * tau) == S.square_colon_is_tjurina
    if with_hilbert:
        fit = S.hilbert_samuel()
        out["e0_equals_mu"] = fit.e0 == mu
        out["northcott"] = fit.e1 >= fit.e0 - tau
        out["reduction_one_e1"] = (fit.e1 == mu - tau) if squares_equal else None
    if with_derlog:
        from .derlog import essential_min_gens, h1_length

        out["h1_length"] = h1_length(S.f) == tau
        out["essential_cyclic_iff_quasihomogeneous"] = (essential_min_gens(S.f) == 1) == qh
    return out


# -- report ---------------------------------------------------------------------

SCHEMA_VERSION = 1
CHECK_NAMES = ("mu", "tau", "quasihomogeneity", "ebs", "beta", "delta", "hilbert", "derlog", "identities")


def _frac_str(v) -> str:
    v = q_to_fraction(v) if not isinstance(v, Fraction) else v
    return str(v)


def _length(v):
    return None if v is None else ("INFINITE" if v is INFINITE else v)


@dataclass
class SingularityReport:
    poly: str
    vars: list
    smooth: bool = False
    mu: object = None
    tau: object = None
    saito_member: bool | None = None
    syzygy_rank_verdict: bool | None = None
    weights: list | None = None
    ebs: int | None = None
    beta: object = None
    delta_length: int | None = None
    i2ji_length: int | None = None
    reduction_number: int | None = None
    e0: int | None = None
    e1: int | None = None
    hilbert_values: list | None = None
    hilbert_stable: bool | None = None
    chain_lengths: list = field(default_factory=list)
    essential_min_gens: int | None = None
    derlog_generators: list | None = None
    identity_checks: dict = field(default_factory=dict)
    timings_ms: dict | None = None
    error: str | None = None

    @property
    def quasihomogeneous(self):
        return self.saito_member

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "input": {"poly": self.poly, "vars": list(self.vars)},
            "order": "local",
            "smooth": self.smooth,
            "mu": _length(self.mu),
            "tau": _length(self.tau),
            "quasihomogeneous": {
                "saito": self.saito_member,
                "syzygy_rank": self.syzygy_rank_verdict,
                "weights": None if self.weights is None else [_frac_str(w) for w in self.weights],
            },
            "ebs": self.ebs,
            "beta": self.beta,
            "delta_length": self.delta_length,
            "i2ji_length": self.i2ji_length,
            "reduction_number": self.reduction_number,
            "hilbert": {
                "e0": self.e0,
                "e1": self.e1,
                "values": self.hilbert_values,
                "stable": self.hilbert_stable,
            },
            "chain_lengths": list(self.chain_lengths),
            "derlog": {
                "essential_min_gens": self.essential_min_gens,
                "generators": self.derlog_generators,
            },
            "identity_checks": dict(sorted(self.identity_checks.items())),
            "timings_ms": self.timings_ms,
            "error": self.error,
        }


def parse_checks(spec) -> set:
    """Normalize a check selection ("all", a comma list, or an iterable)."""
    if isinstance(spec, str):
        items = [s.strip() for s in spec.split(",") if s.strip()]
    else:
        items = list(spec)
    if not items:
        raise ValueError("no checks requested")
    unknown = [c for c in items if c not in CHECK_NAMES + ("all",)]
    if unknown:
        raise ValueError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(CHECK_NAMES)}, all")
    if "all" in items:
        return set(CHECK_NAMES)
    return set(items)


def analyze(f: Polynomial, names: Sequence[str], checks="all", timings: dict | None = None) -> SingularityReport:
    """Build the report for f.  Raises NotIsolated for an infinite Milnor
    number at a singular origin.  ``timings``, if given, receives
    milliseconds per stage."""
    import time

    checks = parse_checks(checks)
    names = list(names)
    report = SingularityReport(poly=format_polynomial(f, names), vars=names)
    S = Singularity(f)

    def timed(label, fn):
        t0 = time.perf_counter()
        value = fn()
        if timings is not None:
            timings[label] = timings.get(label, 0) + round((time.perf_counter() - t0) * 1000, 3)
        return value

    if S.smooth:
        report.smooth = True
        report.mu = report.tau = 0
    else:
        timed("mu_tau", lambda: (S.mu, S.tau))
        report.mu, report.tau = S.mu, S.tau
        S.require_isolated()

    if "derlog" in checks:
        from .derlog import derlog_generators, essential_min_gens

        report.essential_min_gens = timed("derlog", lambda: essential_min_gens(f))
        report.derlog_generators = timed("derlog", lambda: [d.format(names) for d in derlog_generators(f)])
    if S.smooth:
        return report

    if "quasihomogeneity" in checks or "identities" in checks:
        report.saito_member = timed("quasihomogeneity", lambda: S.saito)
        report.syzygy_rank_verdict = timed("quasihomogeneity", lambda: S.syzygy_rank_verdict)
        report.weights = timed("quasihomogeneity", lambda: S.weights)
    if checks & {"ebs", "beta", "identities"}:
        report.ebs = timed("ebs", lambda: S.ebs)
        report.chain_lengths = timed("ebs", lambda: S.chain_lengths)
    if checks & {"beta", "identities"}:
        report.beta = timed("beta", lambda: S.beta)
    if checks & {"delta", "identities"}:
        report.delta_length = timed("delta", lambda: S.delta_length)
        report.i2ji_length = timed("delta", lambda: S.i2ji_length)
    if "hilbert" in checks:
        fit = timed("hilbert", S.hilbert_samuel)
        report.e0, report.e1 = fit.e0, fit.e1
        report.hilbert_values, report.hilbert_stable = fit.values, fit.stable
        report.reduction_number = timed("hilbert", S.reduction_number)
    if "identities" in checks:
        report.identity_checks = timed(
            "identities", lambda: evaluate_identities(S, "hilbert" in checks, "derlog" in checks)
        )
    return report
