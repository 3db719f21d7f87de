from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from singinv.errors import ArityMismatch, NotFiniteLength
from singinv.parsing import parse_polynomial
from singinv.poly import MonomialOrder, Polynomial
from singinv.stdbasis import INFINITE
from singinv.syzygy import (
    SyzygyMatrix,
    combine,
    evaluate_at_zero,
    koszul_boundaries,
    local_min_gens,
    min_gens_finite_length,
    minimalize_columns,
    module_equal,
    module_membership,
    module_std,
    quotient_length,
    rational_rank,
    syzygies,
)
from strategies import nonzero_polynomials

XY = ["x", "y"]
G2 = MonomialOrder.global_(2)
L2 = MonomialOrder.local(2)


def P(text, names=XY):
    return parse_polynomial(text, names)


def M(rows, names=XY):
    return SyzygyMatrix.from_rows([[P(e, names) for e in row] for row in rows])


CIRCLE_MATRIX = [
    ["-y", "x^2-1", "x*y"],
    ["x", "x*y", "y^2-1"],
    ["0", "-2*x", "-2*y"],
]

CURVE_MATRIX = [
    ["24*x+18*y^2", "96*y+18*x*y"],
    ["-6*x^2-4*x*y^2", "-24*x*y-4*x^2*y+2*y^3"],
    ["-4*x*y-3*y^3", "-x^2-16*y^2-3*x*y^2"],
]


def extended(f):
    return f.gradient() + [f]


class TestSyzygies:
    def test_regular_sequence(self):
        Z = syzygies([P("x"), P("y")], G2)
        assert Z.ncols == 1
        assert module_equal(Z, SyzygyMatrix.from_columns([(P("-y"), P("x"))]), G2)

    def test_circle_matches_displayed_matrix(self):
        f = P("x^2+y^2-1")
        Z = syzygies(extended(f), G2)
        shown = M(CIRCLE_MATRIX)
        shown_with_targets = SyzygyMatrix(shown.columns, 3, 2, tuple(extended(f)))
        assert shown_with_targets.check_relations()
        assert module_equal(Z, shown, G2)

    def test_example_curve_displayed_matrix(self):
        f = P("x^4+x^3*y^2+y^6")
        # this matrix lists the rows in the order (f, f_x, f_y)
        gens = [f] + f.gradient()
        shown = SyzygyMatrix(M(CURVE_MATRIX).columns, 3, 2, tuple(gens))
        assert shown.check_relations()
        Z = syzygies(gens, L2)
        assert module_equal(Z, shown, L2)
        assert local_min_gens(Z, L2) == 2
        assert rational_rank(evaluate_at_zero(Z)) == 0

    def test_columns_annihilate(self):
        f = P("x^5+y^5-x^2*y^2")
        for order in (G2, L2):
            assert syzygies(extended(f), order).check_relations()

    def test_module_generators(self):
        # syzygies of vectors (x, 0), (0, y), (y, x): one relation
        gens = [(P("x"), P("0")), (P("0"), P("y")), (P("y"), P("x"))]
        Z = syzygies(gens, G2)
        assert Z.check_relations()
        assert Z.ncols >= 1

    def test_empty(self):
        with pytest.raises(ValueError):
            syzygies([], G2)


class TestKoszul:
    def test_two_generators(self):
        B = koszul_boundaries([P("x"), P("y")])
        assert B.columns == ((P("-y"), P("x")),)

    def test_count_and_relations(self):
        f = P("x^4+x^3*y^2+y^6")
        gens = [f] + f.gradient()
        B = koszul_boundaries(gens)
        assert B.ncols == 3
        assert B.check_relations()

    def test_zero_entry(self):
        B = koszul_boundaries([P("x"), P("0"), P("y")])
        assert (P("0"), P("x"), P("0")) in B.columns
        assert (P("0"), P("-y"), P("0")) in B.columns

    def test_boundaries_inside_cycles(self):
        for text in ["x^4+x^3*y^2+y^6", "x^2+y^2-1", "x^3-y^2"]:
            gens = [P(text)] + P(text).gradient()
            Z = syzygies(gens, G2)
            B = koszul_boundaries(gens)
            assert all(module_membership(c, Z, G2) for c in B.columns)


class TestMembership:
    def test_circle_one_form(self):
        # x dx + y dy against xy dx - (x^2-1) dy and (y^2-1) dx - xy dy
        w0 = (P("x"), P("y"))
        span = SyzygyMatrix.from_columns([(P("x*y"), P("-(x^2-1)")), (P("y^2-1"), P("-x*y"))])
        assert module_membership(w0, span, G2)

    def test_zero_and_degree_obstruction(self):
        span = SyzygyMatrix.from_columns([(P("x"),)])
        assert module_membership((P("0"),), span, G2)
        assert not module_membership((P("1"),), span, G2)

    def test_rank_mismatch(self):
        span = SyzygyMatrix.from_columns([(P("x"), P("y"))])
        with pytest.raises(ArityMismatch):
            module_membership((P("x"),), span, G2)

    def test_local_units(self):
        span = SyzygyMatrix.from_columns([(P("1+x"), P("0"))])
        assert module_membership((P("1"), P("0")), span, L2)
        assert not module_membership((P("1"), P("0")), span, G2)


class TestFiniteLength:
    def test_node_is_cyclic(self):
        f = P("x^2+y^2")
        gens = [f] + f.gradient()
        Z, B = syzygies(gens, G2), koszul_boundaries(gens)
        assert min_gens_finite_length(Z, B, L2) == 1
        assert quotient_length(Z, B, L2) == 1

    def test_equal_modules(self):
        f = P("x^3-y^2")
        B = koszul_boundaries([f] + f.gradient())
        assert min_gens_finite_length(B, B, L2) == 0

    def test_smooth_point(self):
        f = P("x^2+y^2-1")
        gens = [f] + f.gradient()
        assert min_gens_finite_length(syzygies(gens, G2), koszul_boundaries(gens), L2) == 0

    def test_infinite_length(self):
        f = P("x^2*y^2")
        gens = [f] + f.gradient()
        with pytest.raises(NotFiniteLength):
            min_gens_finite_length(syzygies(gens, G2), koszul_boundaries(gens), L2)

    def test_needs_local_order(self):
        B = koszul_boundaries([P("x"), P("y")])
        with pytest.raises(ValueError):
            min_gens_finite_length(B, B, G2)

    def test_quotient_length_of_free_module(self):
        # R/<x,y> + R/<x,y^2> has length 1 + 2
        num = SyzygyMatrix.from_columns([(P("1"), P("0")), (P("0"), P("1"))])
        den = SyzygyMatrix.from_columns(
            [(P("x"), P("0")), (P("y"), P("0")), (P("0"), P("x")), (P("0"), P("y^2"))]
        )
        assert quotient_length(num, den, L2) == 3
        assert module_std(den.columns, 2, L2).colength() == 3
        assert min_gens_finite_length(num, den, L2) == 2
        half = SyzygyMatrix.from_columns([(P("x"), P("0")), (P("0"), P("y^2"))])
        assert quotient_length(num, half, L2) is INFINITE


class TestConstantMatrices:
    def test_rank(self):
        assert rational_rank([[0, 0], [0, 0], [0, 0]]) == 0
        assert rational_rank([[1, 0], [0, 1]]) == 2
        assert rational_rank([[Fraction(1, 2), 1], [1, 2]]) == 1
        assert rational_rank([]) == 0

    def test_circle_constants(self):
        C = evaluate_at_zero(M(CIRCLE_MATRIX))
        assert C == [[0, -1, 0], [0, 0, -1], [0, 0, 0]]
        assert rational_rank(C) == 2

    def test_curve_constants(self):
        assert evaluate_at_zero(M(CURVE_MATRIX)) == [[0, 0]] * 3

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
    def test_rank_matches_sympy(self, rows):
        import sympy

        assert rational_rank(rows) == sympy.Matrix(rows).rank()


def test_minimalize_circle_to_two():
    f = P("x^2+y^2-1")
    Z = syzygies(extended(f), G2)
    assert minimalize_columns(Z, G2).ncols == 2


def test_combine():
    out = combine([P("x"), P("y")], [(P("1"), P("0")), (P("0"), P("1"))])
    assert out == (P("x"), P("y"))


@given(st.lists(nonzero_polynomials(2, 3, 3), min_size=2, max_size=3), st.sampled_from(["global", "local"]))
def test_syzygy_columns_annihilate(gens, kind):
    order = G2 if kind == "global" else L2
    Z = syzygies(gens, order)
    for col in Z.columns:
        total = Polynomial.zero(2)
        for a, g in zip(col, gens):
            total = total + a * g
        assert not total
    # Koszul relations are always syzygies
    for c in koszul_boundaries(gens).columns:
        assert module_membership(c, Z, order)
