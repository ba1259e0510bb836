"""Self-test of the formal calculus: delta-function identities, the formal
Taylor theorem, the automorphism property, associativity of iterated
binomial expansions, delta substitution and residues."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .formal_calculus import (SUBSTITUTE_DENOMINATOR, SUBSTITUTE_NUMERATOR, DegreeWindow, DeltaExpr,
                              DeltaKernel, LaurentPoly, binom, delta_expr_equal, delta_substitute,
                              derive, expand_power, residue, taylor_shift, three_term_delta,
                              two_term_delta)
from .report import Report, Violation

X = LaurentPoly.var("x")

# Laurent polynomials in x with finitely many negative powers
SAMPLE_POLYS = (
    LaurentPoly.var("x", -3) + 2 * X,
    LaurentPoly.var("x", -1),
    3 * X ** 2 - LaurentPoly.var("x", -2) + Fraction(1, 2),
    X ** 4 - Fraction(5, 3) * X + LaurentPoly.var("x", -5),
    LaurentPoly.const(Fraction(7)),
)


def _compare(report: Report, axiom: str, lhs: LaurentPoly, rhs: LaurentPoly, detail: str) -> None:
    if lhs == rhs:
        return
    keys = sorted(set(i for i, _ in lhs.items()) | set(i for i, _ in rhs.items()))
    for k in keys:
        if lhs.coeff(k) != rhs.coeff(k):
            report.add(Violation(axiom, (), k, lhs.coeff(k), rhs.coeff(k), detail))


def check_delta_identities(window: Optional[DegreeWindow] = None) -> Report:
    """The two-term and three-term delta identities vanish on the window."""
    window = window or DegreeWindow.uniform(8)
    report = Report()
    report.merge(delta_expr_equal(two_term_delta(), DeltaExpr(), window, axiom="two_term_delta"))
    report.merge(delta_expr_equal(three_term_delta(), DeltaExpr(), window, axiom="three_term_delta"))
    return report


def check_taylor(ns: Iterable[int] = range(-5, 6), hi: int = 8) -> Report:
    """Formal Taylor theorem, automorphism property, associativity of
    iterated expansions and the cancellation ((x+y)-y)^n = x^n."""
    ns = list(ns)
    win = DegreeWindow({"y": (0, hi), "z": (0, hi), "w": (0, hi)})
    report = Report().check("formal_taylor").check("automorphism")
    report.check("shift_associativity").check("cancellation")

    # e^{y d/dx} x^n against the binomial expansion of (x+y)^n
    for n in ns:
        _compare(report, "formal_taylor", taylor_shift(X ** n, "x", "y", win),
                 expand_power("x", "y", 1, n, win), f"n={n}")
    for p in SAMPLE_POLYS:
        want = LaurentPoly()
        for idx, c in p.items():
            e = dict(idx).get("x", 0)
            want = want + expand_power("x", "y", 1, e, win) * c
        _compare(report, "formal_taylor", taylor_shift(p, "x", "y", win), want, f"p={p}")

    # e^{y d/dx}(p q) = (e^{y d/dx} p)(e^{y d/dx} q), modulo y^(hi+1)
    for p in SAMPLE_POLYS:
        for q in SAMPLE_POLYS:
            lhs = taylor_shift(p * q, "x", "y", win)
            rhs = (taylor_shift(p, "x", "y", win) * taylor_shift(q, "x", "y", win)).truncate("y", hi)
            _compare(report, "automorphism", lhs, rhs, f"p={p}, q={q}")

    # (x + (y+z))^n = ((x+y) + z)^n on y, z in [0, hi]
    for n in ns:
        lhs = LaurentPoly()
        for k in range(0, 2 * hi + 1):
            lhs = lhs + (expand_power("y", "z", 1, k) * X ** (n - k)) * binom(n, k)
        rhs = LaurentPoly()
        for j in range(0, hi + 1):
            rhs = rhs + (expand_power("x", "y", 1, n - j, win) * LaurentPoly.var("z", j)) * binom(n, j)
        lhs = lhs.truncate("y", hi).truncate("z", hi)
        rhs = rhs.truncate("y", hi).truncate("z", hi)
        _compare(report, "shift_associativity", lhs, rhs, f"n={n}")

    # ((x+y) - y)^n = x^n: shift x by -w in (x+y)^n, then set w = y
    for n in ns:
        shifted = taylor_shift(expand_power("x", "y", 1, n, win), "x", "w", win, sign=-1)
        back = shifted.rename("w", "y").truncate("y", hi)
        _compare(report, "cancellation", back, X ** n, f"n={n}")
    return report


def check_substitution(window: Optional[DegreeWindow] = None) -> Report:
    """Both delta substitutions preserve every coefficient on the window."""
    window = window or DegreeWindow.uniform(4)
    kern = DeltaKernel("x", "y", "z")
    report = Report().check("delta_substitution")
    factors = [LaurentPoly.var("x", 2), LaurentPoly.const(Fraction(1)), LaurentPoly.var("y"),
               LaurentPoly.monomial({"x": 1, "y": 2, "z": -1}, Fraction(3)) + LaurentPoly.var("z", -2)]
    for f in factors:
        e = DeltaExpr.kernel(kern, f)
        for target in (SUBSTITUTE_DENOMINATOR, SUBSTITUTE_NUMERATOR):
            sub = delta_expr_equal(e, delta_substitute(e, target), window, axiom="delta_substitution")
            report.merge(sub)
    return report


def check_residues() -> Report:
    """Res_x of a derivative vanishes; Res_x0 of x0^-1 d((x1-x2)/x0) is 1
    on the monomial x1^0 x2^0."""
    report = Report().check("residue")
    for p in SAMPLE_POLYS:
        r = residue(derive(p, "x"), "x")
        if r:
            report.add(Violation("residue", (), None, 0, r, f"Res_x d/dx ({p})"))
    kern = DeltaKernel("x0", "x1", "x2", 1, -1)
    r = residue(DeltaExpr.kernel(kern), "x0")
    got = r.coeff(())
    if got != 1:
        report.add(Violation("residue", (), (), 1, got, "Res_x0 of the Jacobi kernel at x1^0 x2^0"))
    return report


def run_self_test() -> Report:
    return Report.combine([check_delta_identities(), check_taylor(), check_substitution(), check_residues()])

