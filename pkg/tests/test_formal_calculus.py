from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ertex.errors import HypothesisViolated, NonSummable
from ertex.formal_calculus import (JACOBI_MINUS, JACOBI_SHIFTED, SUBSTITUTE_DENOMINATOR,
                                   SUBSTITUTE_NUMERATOR, DegreeWindow, DeltaExpr, DeltaKernel,
                                   LaurentPoly, binom, delta_expr_coeff, delta_expr_equal,
                                   delta_expr_window, delta_substitute, derive, expand_power,
                                   multi_index, residue, taylor_shift, three_term_delta,
                                   two_term_delta)

X = LaurentPoly.var("x")
Y = LaurentPoly.var("y")
SX, SY = sympy.symbols("x y")


def to_sympy(p: LaurentPoly):
    out = 0
    for idx, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for v, e in idx:
            term *= sympy.Symbol(v) ** e
        out += term
    return sympy.expand(out)


# -- binomials and expansions ----------------------------------------------


@pytest.mark.parametrize("n,k,want", [(3, 2, 3), (-1, 3, -1), (-2, 3, -4), (5, 7, 0), (0, 0, 1)])
def test_binom_examples(n, k, want):
    assert binom(n, k) == want


@pytest.mark.parametrize("n", range(-7, 8))
def test_binom_matches_sympy(n):
    for k in range(0, 9):
        assert binom(n, k) == sympy.binomial(n, k)


def test_binom_rejects_negative_k():
    with pytest.raises(ValueError):
        binom(3, -1)


def test_expand_power_examples():
    assert expand_power("x", "y", 1, 2) == X ** 2 + 2 * X * Y + Y ** 2
    w = DegreeWindow({"y": (0, 2)})
    assert expand_power("x", "y", 1, -1, w) == X ** -1 - X ** -2 * Y + X ** -3 * Y ** 2
    assert expand_power("x", "y", -1, 0) == LaurentPoly.const(Fraction(1))


@pytest.mark.parametrize("n", range(-5, 6))
@pytest.mark.parametrize("sign", [1, -1])
def test_expand_power_matches_sympy_series(n, sign):
    hi = 6
    got = expand_power("x", "y", sign, n, DegreeWindow({"y": (0, hi)}))
    want = sympy.series((SX + sign * SY) ** n, SY, 0, hi + 1).removeO()
    assert sympy.simplify(to_sympy(got) - sympy.expand(want)) == 0


def test_expand_power_rejects_same_variable():
    with pytest.raises(ValueError):
        expand_power("x", "x", 1, 2)


# -- derivatives and Taylor shifts ------------------------------------------


def test_derive_examples():
    assert derive(X ** 2 + X ** -1, "x") == 2 * X - X ** -2
    assert derive(X ** -1, "x", 2) == 2 * X ** -3
    assert derive(LaurentPoly.const(Fraction(5)), "x") == LaurentPoly()


def test_taylor_shift_examples():
    assert taylor_shift(X ** 2, "x", "y") == X ** 2 + 2 * X * Y + Y ** 2
    w = DegreeWindow({"y": (0, 2)})
    assert taylor_shift(X ** -1, "x", "y", w) == X ** -1 - X ** -2 * Y + X ** -3 * Y ** 2
    assert taylor_shift(LaurentPoly(), "x", "y") == LaurentPoly()


@pytest.mark.parametrize("n", range(-5, 6))
def test_taylor_shift_is_binomial_expansion(n):
    w = DegreeWindow({"y": (0, 8)})
    assert taylor_shift(X ** n, "x", "y", w) == expand_power("x", "y", 1, n, w)


# -- residues ---------------------------------------------------------------


def test_residue_examples():
    assert residue(3 * X ** -1 + 2 * X, "x") == LaurentPoly.const(Fraction(3))
    assert residue(X ** 2, "x") == LaurentPoly()
    r = residue(DeltaExpr.kernel(JACOBI_MINUS), "x0")
    assert r.coeff(()) == 1


def test_residue_of_kernel_in_denominator_is_finite_binomial():
    # Res_x0 x0^-1 d((x1-x2)/x0) x0^2 collects n = 2: (x1 - x2)^2
    e = DeltaExpr.kernel(JACOBI_MINUS, LaurentPoly.var("x0", 2))
    want = expand_power("x1", "x2", -1, 2)
    assert residue(e, "x0") == want


def test_residue_in_numerator_variable():
    # x1^-1 only meets n = -1, k = 0 of the kernel
    r = residue(DeltaExpr.kernel(JACOBI_MINUS), "x1")
    assert r == LaurentPoly.const(Fraction(1))


def test_residue_refuses_infinite_sums():
    # x1^-2 times the kernel needs every (n, k) with n - k = 1
    with pytest.raises(NonSummable):
        residue(DeltaExpr.kernel(JACOBI_MINUS, LaurentPoly.var("x1", -2)), "x1")
    with pytest.raises(NonSummable):
        residue(DeltaExpr.kernel(DeltaKernel("x", "x", "y")), "x")


# -- delta kernels ----------------------------------------------------------


def test_kernel_coefficient_examples():
    e = DeltaExpr.kernel(JACOBI_SHIFTED)
    assert delta_expr_coeff(e, multi_index(x0=0, x1=-1, x2=0))[0] == 1
    assert delta_expr_coeff(DeltaExpr(), multi_index(x0=3))[0] == 0
    for idx in DegreeWindow.uniform(3).indices(["x0", "x1", "x2"]):
        assert delta_expr_coeff(two_term_delta(), idx)[0] == 0


@pytest.mark.parametrize("s1,s2", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_kernel_coefficients_against_sympy(s1, s2):
    """Coefficient of a^-n-1 b^(n-k) c^k is read off a sympy series of (s1 b + s2 c)^n."""
    a, b, c = sympy.symbols("a b c")
    kern = DeltaKernel("a", "b", "c", s1, s2)
    coeffs = delta_expr_window(DeltaExpr.kernel(kern), DegreeWindow.uniform(4))
    for n in range(-4, 4):
        ser = sympy.expand(sympy.series((s1 * b + s2 * c) ** n, c, 0, 5).removeO())
        for k in range(0, 5):
            if not -4 <= n - k <= 4:
                continue
            want = ser.coeff(c, k).coeff(b, n - k)
            got = coeffs.get(multi_index(a=-n - 1, b=n - k, c=k), 0)
            assert got == want, (n, k)


def test_delta_identities_hold_on_window():
    w = DegreeWindow.uniform(6)
    assert delta_expr_equal(two_term_delta(), DeltaExpr(), w).passed
    assert delta_expr_equal(three_term_delta(), DeltaExpr(), w).passed


def test_delta_expr_equal_reflexive_and_locates_difference():
    e = DeltaExpr.kernel(DeltaKernel("x", "y", "z"), X ** 3 - Y)
    assert delta_expr_equal(e, e, DegreeWindow.uniform(3)).passed
    plus = DeltaExpr.kernel(DeltaKernel("x1", "x2", "x0", 1, 1))
    minus = DeltaExpr.kernel(DeltaKernel("x1", "x2", "x0", 1, -1))
    report = delta_expr_equal(plus, minus, DegreeWindow.uniform(4))
    assert not report.passed
    first = report.violations[0]
    assert first.index == multi_index(x0=1, x1=-2, x2=0)
    assert (first.expected, first.actual) == (1, -1)


def test_repeated_kernel_variable_is_not_summable():
    with pytest.raises(NonSummable):
        delta_expr_window(DeltaExpr.kernel(DeltaKernel("x", "y", "y")), DegreeWindow.uniform(2))


# -- delta substitution -----------------------------------------------------


@pytest.mark.parametrize("factor", [X ** 2, LaurentPoly.const(Fraction(1)), Y,
                                    X * Y ** 2 * LaurentPoly.var("z", -1)])
@pytest.mark.parametrize("target", [SUBSTITUTE_DENOMINATOR, SUBSTITUTE_NUMERATOR])
def test_delta_substitution_preserves_coefficients(factor, target):
    e = DeltaExpr.kernel(DeltaKernel("x", "y", "z"), factor)
    assert delta_expr_equal(e, delta_substitute(e, target), DegreeWindow.uniform(4)).passed


def test_delta_substitution_example_values():
    e = DeltaExpr.kernel(DeltaKernel("x", "y", "z"), X ** 2)
    sub = delta_substitute(e, SUBSTITUTE_DENOMINATOR)
    (term,) = sub.terms
    assert term.factor == expand_power("y", "z", 1, 2)
    const = DeltaExpr.kernel(DeltaKernel("x", "y", "z"))
    assert delta_substitute(const, SUBSTITUTE_DENOMINATOR).terms == const.terms


def test_delta_substitution_refuses_negative_powers():
    e = DeltaExpr.kernel(DeltaKernel("x", "y", "z"), X ** -1)
    with pytest.raises(HypothesisViolated):
        delta_substitute(e, SUBSTITUTE_DENOMINATOR)


# -- ring properties --------------------------------------------------------

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monomials = st.tuples(st.integers(-3, 3), st.integers(-3, 3), small)
polys = st.lists(monomials, max_size=5).map(
    lambda ts: sum((LaurentPoly.monomial({"x": a, "y": b}, c) for a, b, c in ts), LaurentPoly()))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_laurent_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == LaurentPoly()


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_derive_is_a_derivation(p, q):
    assert derive(p * q, "x") == derive(p, "x") * q + p * derive(q, "x")


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_taylor_shift_is_multiplicative(p, q):
    # no z occurs in p or q, so the shift by z only truncates above z^hi
    w = DegreeWindow({"z": (0, 6)})
    lhs = taylor_shift(p * q, "x", "z", w)
    rhs = (taylor_shift(p, "x", "z", w) * taylor_shift(q, "x", "z", w)).truncate("z", 6)
    assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(polys)
def test_sympy_round_trip(p):
    assert sympy.expand(to_sympy(p) - to_sympy(p)) == 0
    assert to_sympy(derive(p, "y")) == sympy.expand(sympy.diff(to_sympy(p), SY))
