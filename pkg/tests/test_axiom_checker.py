import pytest

from ertex.algebra_model import exp_D, vertex_series
from ertex.axiom_checker import (AXIOMS, SUITES, check_d_bracket, check_d_derivative, check_D_compat,
                                 check_injectivity, check_jacobi, check_skew_symmetry, check_truncation,
                                 check_vacuum_creation, check_vfss, expand_axioms, run_suite)
from ertex.constructions import d_closure, forget
from ertex.fixtures import commutative_va, naive_truncated_va, strip_to_ertex, zero_algebra
from ertex.formal_calculus import DegreeWindow
from ertex.linear_space import LinearMap, VectorElem

import oracles
from conftest import series, vec


def modes_with(p, key, value):
    modes = dict(p.modes)
    modes[key] = value
    return p.with_(modes=modes)


# -- oracles --------------------------------------------------------------------


@pytest.mark.parametrize("k", [2, 3, 4])
def test_genuine_fixtures_satisfy_mode_identities(k):
    p = commutative_va(k)
    D = p.derivation
    assert next(oracles.borcherds_failures(p), None) is None
    assert next(oracles.skew_failures(p, D), None) is None
    assert next(oracles.derivative_failures(p, D), None) is None
    assert next(oracles.bracket_failures(p, D), None) is None
    report = run_suite(p)
    assert report.passed, report.render()


def test_literal_table_verdicts_match_oracles(naive3):
    D = naive3.derivation
    report = run_suite(naive3)
    oracle = {
        "jacobi": next(oracles.borcherds_failures(naive3), None) is None,
        "skew_symmetry": next(oracles.skew_failures(naive3, D), None) is None,
        "d_derivative": next(oracles.derivative_failures(naive3, D), None) is None,
        "d_bracket": next(oracles.bracket_failures(naive3, D), None) is None,
    }
    assert oracle == {"jacobi": False, "skew_symmetry": False, "d_derivative": True, "d_bracket": False}
    for axiom, ok in oracle.items():
        assert report.ok(axiom) == ok, axiom


def test_closure_of_strip_verdicts_match_oracles():
    q, _, _ = d_closure(strip_to_ertex(3))
    D = q.derivation
    report = run_suite(q)
    assert next(oracles.borcherds_failures(q), None) is not None
    assert not report.ok("jacobi")
    assert report.ok("skew_symmetry") == (next(oracles.skew_failures(q, D), None) is None)
    assert report.ok("d_derivative") == (next(oracles.derivative_failures(q, D), None) is None)
    assert report.ok("d_bracket") == (next(oracles.bracket_failures(q, D), None) is None)


# -- exact reduction against the windowed delta-kernel route ----------------------


@pytest.mark.parametrize("p", [commutative_va(3), naive_truncated_va(3), strip_to_ertex(3),
                               strip_to_ertex(4), zero_algebra(2)], ids=lambda p: p.name)
def test_exact_and_delta_routes_agree_per_triple(p):
    for u in p.basis:
        for v in p.basis:
            for w in p.basis:
                exact = check_jacobi(p, method="exact", triples=[(u, v, w)]).passed
                delta = check_jacobi(p, method="delta", triples=[(u, v, w)]).passed
                oracle = next(oracles.borcherds_failures(p, triples=[(u, v, w)]), None) is None
                assert exact == delta == oracle, (u, v, w)


def test_delta_route_reports_monomials_of_the_identity(f1):
    bad = modes_with(f1, ("t", "t", -1), vec(t=1))
    report = check_jacobi(bad, method="delta")
    assert not report.passed
    v = report.violations[0]
    assert v.elements == ("t", "t", "one")
    assert v.index == () and v.actual == vec(t2=1)
    exact = check_jacobi(bad)
    assert [x.render() for x in exact.violations] == [x.render() for x in report.violations]


# -- individual checkers ------------------------------------------------------------


def test_truncation(f1):
    assert check_truncation(f1).passed
    assert check_truncation(zero_algebra(1)).passed
    declared = f1.with_(support={("t", "one"): (-1, -1)})
    report = check_truncation(declared)
    assert [v.elements for v in report.violations] == [("t", "one", -2)]


def test_jacobi_examples(f1):
    assert check_jacobi(f1, triples=[("t", "t", "t")]).passed
    assert check_jacobi(zero_algebra(2)).passed
    bad = modes_with(f1, ("t", "t", -1), vec(t=1))
    report = check_jacobi(bad)
    assert not report.passed and report.violations[0].index is not None


def test_vfss(f1):
    assert check_vfss(f1).passed
    assert check_vfss(zero_algebra(2)).passed
    assert not check_vfss(modes_with(f1, ("t", "t2", -1), vec(t=1))).passed


def test_d_compat(f1):
    assert check_D_compat(f1).passed
    zero = LinearMap({b: VectorElem() for b in f1.basis})
    report = check_D_compat(f1, zero)
    assert not report.ok("d_derivative")
    trivial = zero_algebra(1, "d-ertex")
    assert check_D_compat(trivial).passed


def test_d_derivative_passes_but_bracket_fails_on_literal_table(naive3):
    assert check_d_derivative(naive3).passed
    assert not check_d_bracket(naive3).passed


def test_skew_symmetry(f1, naive3):
    assert check_skew_symmetry(f1).passed
    # on the literal table: Y(t,x)t2 = x t2, but e^{xD}Y(t2,-x)t = -2x t2 - 3x^2 t - x^3
    assert vertex_series(naive3, "t", "t2") == series(x1=vec(t2=1))
    report = check_skew_symmetry(naive3)
    assert not report.passed
    pairs = {v.elements for v in report.violations}
    assert ("t", "t2") in pairs
    bad_D = LinearMap({"one": VectorElem(), "t": vec(t2=2), "t2": VectorElem()})
    assert not check_skew_symmetry(f1, bad_D).passed


def test_vacuum_and_creation(f1):
    report = check_vacuum_creation(f1)
    assert report.passed and set(report.checks) == {"vacuum", "creation", "strong_creation"}
    assert vertex_series(f1, "t", "one") == exp_D(f1, "t", "x")
    extra = modes_with(f1, ("one", "t", -2), vec(t2=1))
    assert not check_vacuum_creation(extra).ok("vacuum")
    pole = modes_with(f1, ("t", "one", 0), vec(t=1))
    assert not check_vacuum_creation(pole).ok("creation")


def test_injectivity():
    assert check_injectivity(strip_to_ertex(3)).passed
    assert check_injectivity(commutative_va(3)).passed
    p = strip_to_ertex(3)
    p = p.with_(basis=p.basis + ("z0",))
    report = check_injectivity(p)
    assert not report.passed
    assert report.violations[0].actual == vec(z0=1)
    assert report.violations[0].elements == ("z0",)


def test_injectivity_witness_is_combination():
    # in the genuine table on {t, t2} with k = 3, t2 acts by zero
    p = forget(commutative_va(3), "vacuum-element")
    report = check_injectivity(p)
    assert [v.actual for v in report.violations] == [vec(t2=1)]
    assert report.violations[0].detail == "Y(t2, x) = 0"
    # a genuine combination: t and s act identically
    q = p.with_(basis=("t", "s"), modes={("t", "t", -1): vec(t=1), ("s", "t", -1): vec(t=1)})
    assert check_injectivity(q).violations[0].actual == vec(t=1, s=-1)


# -- suites -----------------------------------------------------------------------


def test_suites_per_kind(f1):
    assert run_suite(f1).checks == ["structure"] + list(SUITES["vertex"])
    d = forget(f1, "vacuum-role")
    assert run_suite(d).checks == ["structure"] + list(SUITES["d-ertex"])
    e = forget(f1, "derivation")
    assert run_suite(e).checks == ["structure"] + list(SUITES["ertex"])


def test_suite_selection_and_groups(f1):
    assert expand_axioms(["d_compat", "jacobi"]) == ["d_derivative", "d_bracket", "jacobi"]
    assert run_suite(f1, ["vacuum_creation"]).checks == ["structure", "vacuum", "creation",
                                                         "strong_creation"]
    with pytest.raises(ValueError):
        expand_axioms(["commutativity"])


def test_suite_stops_on_structural_failure(f1):
    broken = f1.with_(derivation=LinearMap({b: VectorElem() for b in f1.basis}))
    report = run_suite(broken)
    assert report.checks == ["structure"]
    assert not report.passed


def test_derivation_axioms_on_plain_ertex_uses_canonical_or_fails(strip3):
    report = run_suite(strip3, ["skew_symmetry"])
    assert not report.passed


def test_window_argument_accepted(f1):
    assert run_suite(f1, ["jacobi"], DegreeWindow.uniform(3), "delta").passed


def test_violations_are_capped():
    p = naive_truncated_va(5)
    report = check_jacobi(p)
    assert len([v for v in report.violations if v.axiom == "jacobi"]) <= 16
    assert report.suppressed["jacobi"] > 0


def test_axiom_names():
    assert AXIOMS[0] == "truncation" and AXIOMS[-1] == "injectivity"
