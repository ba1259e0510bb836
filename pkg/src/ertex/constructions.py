"""Embeddings: derivative closure, vacuum adjunction, homomorphisms and the
universal factorizations through them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Tuple

from .algebra_model import (Presentation, d_minus_d_dx, derivation_of, derivation_powers,
                            validate, vertex_series)
from .axiom_checker import check_injectivity, run_suite
from .errors import MaxOrderExceeded, NotApplicable, NotClosed, PreconditionFailed
from .formal_calculus import LaurentPoly, derive, mi_get
from .linear_space import (BasisId, LinearMap, SeriesFamily, VectorElem, check_injective_family,
                           solve, solve_membership)
from .report import Report, Violation

DEFAULT_MAX_ORDER = 8


@dataclass(frozen=True)
class EmbeddingWitness:
    source: Presentation
    target: Presentation
    inclusion: LinearMap


@dataclass
class ClosureTrace:
    """Record of the greedy sweep.

    ``accepted`` lists the pairs (basis id, derivative order) kept as basis
    elements, ``names`` gives their identifiers in the closure, and
    ``rejected`` maps each dependent pair to its combination over the kept
    elements.
    """

    accepted: List[Tuple[BasisId, int]] = field(default_factory=list)
    rejected: Dict[Tuple[BasisId, int], VectorElem] = field(default_factory=dict)
    names: Dict[Tuple[BasisId, int], BasisId] = field(default_factory=dict)
    log: List[str] = field(default_factory=list)

    def render(self) -> str:
        return "".join(line + "\n" for line in self.log)


# --------------------------------------------------------------------------
# forgetting structure


def _restrict(v: VectorElem, keep) -> VectorElem:
    return VectorElem({b: c for b, c in v.items() if b in keep})


def forget(p: Presentation, what: str) -> Presentation:
    """Drop the vacuum role, the derivation, or the vacuum basis vector."""
    if what == "vacuum-role":
        if p.kind != "vertex" or p.vacuum is None:
            raise NotApplicable(f"{p.name} has no vacuum role to forget")
        return p.with_(kind="d-ertex", vacuum=None, derivation=derivation_of(p))
    if what == "derivation":
        if p.kind == "ertex":
            raise NotApplicable(f"{p.name} is already a plain ertex algebra")
        return p.with_(kind="ertex", vacuum=None, derivation=None)
    if what == "vacuum-element":
        if p.vacuum is None:
            raise NotApplicable(f"{p.name} has no vacuum vector")
        one = p.vacuum
        keep = [b for b in p.basis if b != one]
        modes = {}
        for (i, j, n), vec in p.modes.items():
            if one in (i, j):
                continue
            if vec.coord(one):
                raise NotClosed(f"({i})_{n} {j} = {vec} leaves the span without {one}")
            modes[(i, j, n)] = vec
        support = None
        if p.support:
            support = {k: r for k, r in p.support.items() if one not in k}
        return Presentation(p.name, "ertex", tuple(keep), modes, None, None, support,
                            p.nilpotence_bound)
    raise ValueError(f"unknown structure {what!r}; expected vacuum-role, derivation or vacuum-element")


# --------------------------------------------------------------------------
# vacuum adjunction


def fresh_name(stem: str, used) -> str:
    k = 0
    while f"{stem}{k}" in used:
        k += 1
    return f"{stem}{k}"


def adjoin_vacuum(p: Presentation) -> Tuple[Presentation, EmbeddingWitness]:
    """Adjoin a vacuum 1 to a D-ertex algebra with Y(u,x)1 = e^{xD}u,
    Y(1,x) = identity and D1 = 0."""
    if p.kind != "d-ertex":
        raise PreconditionFailed(f"{p.name} is a {p.kind} presentation; a d-ertex one is required",
                                 Report().check("kind"))
    report = run_suite(p, ["truncation", "jacobi", "vfss", "d_derivative", "d_bracket", "skew_symmetry"])
    if not report.passed:
        raise PreconditionFailed(f"{p.name} is not a D-ertex algebra", report)
    D = p.derivation
    one = fresh_name("vac", set(p.basis))
    modes = dict(p.modes)
    for u in p.basis:
        for k, w in enumerate(derivation_powers(D, VectorElem.basis(u), p.nilpotence_bound)):
            modes[(u, one, -k - 1)] = w * Fraction(1, factorial(k))
    for u in p.basis + (one,):
        modes[(one, u, -1)] = VectorElem.basis(u)
    images = dict(D.images)
    images[one] = VectorElem()
    support = None
    if p.support:
        support = dict(p.support)
        for u in p.basis:
            entries = [n for (a, b, n) in modes if a == u and b == one]
            support[(u, one)] = (min(entries), max(entries))
        for u in p.basis + (one,):
            support[(one, u)] = (-1, -1)
    q = Presentation(p.name, "vertex", p.basis + (one,), modes, LinearMap(images), one, support,
                     p.nilpotence_bound)
    return q, EmbeddingWitness(p, q, LinearMap.identity(p.basis))


# --------------------------------------------------------------------------
# derivative closure


def derivative_family(p: Presentation, i: BasisId, n: int) -> SeriesFamily:
    """(d/dx)^n Y(e_i, x) e_j for every basis e_j."""
    return SeriesFamily({j: derive(vertex_series(p, i, j, "x"), "x", n) for j in p.basis})


def _series_to_modes(i: BasisId, j: BasisId, series: LaurentPoly, modes: dict) -> None:
    for idx, vec in series.items():
        modes[(i, j, -mi_get(idx, "x") - 1)] = vec


def d_closure(p: Presentation, max_order: int = DEFAULT_MAX_ORDER
              ) -> Tuple[Presentation, EmbeddingWitness, ClosureTrace]:
    """Close an injective ertex algebra under a derivation.

    Formal derivatives (e_i, n) are examined by increasing order n and then
    in basis order, and only when (e_i, n-1) was kept. A candidate is kept
    when its family (d/dx)^n Y(e_i,x)e_j is independent of the families kept
    so far. Otherwise its combination over them becomes the image of
    (e_i, n-1) under D. Orders up to ``max_order`` may be kept. The sweep
    at order max_order+1 must keep nothing, or MaxOrderExceeded is raised.
    """
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    pre = validate(p)
    if pre.passed:
        pre.merge(check_injectivity(p))
    if not pre.passed:
        raise PreconditionFailed(f"{p.name} is not an injective ertex presentation", pre)

    trace = ClosureTrace()
    used = set(p.basis)
    kept: List[Tuple[BasisId, int]] = []
    families: List[SeriesFamily] = []
    images: Dict[BasisId, VectorElem] = {}
    for i in p.basis:
        kept.append((i, 0))
        families.append(derivative_family(p, i, 0))
        trace.names[(i, 0)] = i
    frontier = list(p.basis)
    n = 0
    while frontier:
        n += 1
        grown = []
        for i in frontier:
            fam = derivative_family(p, i, n)
            coeffs = solve_membership(fam, families)
            prev = trace.names[(i, n - 1)]
            if coeffs is None:
                if n > max_order:
                    raise MaxOrderExceeded(
                        f"derivative ({i}, {n}) is still independent; no closure within order {max_order}")
                name = f"D{n}_{i}"
                if name in used:
                    name = fresh_name(name + "_", used)
                used.add(name)
                kept.append((i, n))
                families.append(fam)
                trace.names[(i, n)] = name
                trace.accepted.append((i, n))
                images[prev] = VectorElem.basis(name)
                trace.log.append(f"accept {i} {n} -> {name}")
                grown.append(i)
            else:
                combo = VectorElem({trace.names[k]: c for k, c in zip(kept, coeffs)})
                trace.rejected[(i, n)] = combo
                images[prev] = combo
                trace.log.append(f"reject {i} {n} = {combo.format([trace.names[k] for k in kept])}")
        frontier = grown

    basis = tuple(trace.names[k] for k in kept)
    for b in basis:
        images.setdefault(b, VectorElem())
    D = LinearMap({b: images[b] for b in basis})
    modes: dict = {}
    for (i, a) in kept:
        for (j, m) in kept:
            series = vertex_series(p, i, j, "x")
            for _ in range(m):
                series = d_minus_d_dx(D, series, "x")
            _series_to_modes(trace.names[(i, a)], trace.names[(j, m)], derive(series, "x", a), modes)
    q = Presentation(p.name, "d-ertex", basis, modes, D, None, None, p.nilpotence_bound)
    return q, EmbeddingWitness(p, q, LinearMap.identity(p.basis)), trace


def closure_families_report(p: Presentation, trace: ClosureTrace) -> Report:
    """Re-derive the trace: kept families are independent and every rejected
    combination reproduces its target family."""
    kept = [(i, 0) for i in p.basis] + list(trace.accepted)
    fams = {k: derivative_family(p, k[0], k[1]) for k in kept}
    report = check_injective_family([fams[k] for k in kept])
    report.check("closure_trace")
    by_name = {trace.names[k]: fams[k] for k in kept}
    for (i, n), combo in trace.rejected.items():
        total = SeriesFamily({j: LaurentPoly() for j in p.basis})
        for name, c in combo.items():
            total = total + by_name[name] * c
        if total != derivative_family(p, i, n):
            report.fail("closure_trace", f"combination for ({i}, {n}) does not reproduce its family",
                        elements=(i, n))
    return report


def check_closure_powers(q: Presentation, trace: ClosureTrace) -> Report:
    """Each kept (e_i, n) equals D^n applied to (e_i, 0)."""
    report = Report().check("closure_powers")
    for (i, n) in trace.accepted:
        powers = derivation_powers(q.derivation, VectorElem.basis(trace.names[(i, 0)]), q.nilpotence_bound)
        got = powers[n] if n < len(powers) else VectorElem()
        want = VectorElem.basis(trace.names[(i, n)])
        if got != want:
            report.add(Violation("closure_powers", (i, n), expected=want, actual=got))
    return report


# --------------------------------------------------------------------------
# homomorphisms


def check_hom(f: LinearMap, a: Presentation, b: Presentation, kind: str) -> Report:
    """f(Y_a(u,x)v) = Y_b(f u, x) f v on basis pairs, plus f D_a = D_b f
    (d-ertex, vertex) and f(1_a) = 1_b (vertex)."""
    if kind not in ("ertex", "d-ertex", "vertex"):
        raise ValueError(f"unknown kind {kind!r}")
    report = Report().check("hom")
    for u in a.basis:
        fu = f(VectorElem.basis(u))
        for v in a.basis:
            fv = f(VectorElem.basis(v))
            lhs = f.apply_series(vertex_series(a, u, v, "x"))
            rhs = vertex_series(b, fu, fv, "x")
            if lhs != rhs:
                for idx in sorted(set(i for i, _ in lhs.items()) | set(i for i, _ in rhs.items())):
                    x, y = lhs.coeff(idx, VectorElem()), rhs.coeff(idx, VectorElem())
                    if x != y:
                        report.add(Violation("hom", (u, v), idx, x, y, "f(Y(u,x)v) vs Y(f u,x)f v"))
    if kind in ("d-ertex", "vertex"):
        report.check("hom_derivation")
        try:
            Da, Db = derivation_of(a), derivation_of(b)
        except NotApplicable as exc:
            report.fail("hom_derivation", str(exc))
        else:
            for u in a.basis:
                x = f(Da(VectorElem.basis(u)))
                y = Db(f(VectorElem.basis(u)))
                if x != y:
                    report.add(Violation("hom_derivation", (u,), expected=x, actual=y, detail="f(D u) vs D f(u)"))
    if kind == "vertex":
        report.check("hom_vacuum")
        if a.vacuum is None or b.vacuum is None:
            report.fail("hom_vacuum", "both presentations need a vacuum")
        else:
            x = f(VectorElem.basis(a.vacuum))
            if x != VectorElem.basis(b.vacuum):
                report.add(Violation("hom_vacuum", (a.vacuum,), expected=VectorElem.basis(b.vacuum), actual=x))
    return report


def check_commutes(phi: LinearMap, inclusion: LinearMap, psi: LinearMap, basis) -> Report:
    """phi(i(u)) = psi(u) for every source basis vector u."""
    report = Report().check("factorization")
    for u in basis:
        e = VectorElem.basis(u)
        x, y = phi(inclusion(e)), psi(e)
        if x != y:
            report.add(Violation("factorization", (u,), expected=y, actual=x, detail="phi(i(u)) vs psi(u)"))
    return report


def factor_through_vacuum(e2: Presentation, witness: EmbeddingWitness, v: Presentation,
                          psi: LinearMap) -> Tuple[LinearMap, Report]:
    """The vertex homomorphism phi(i(u) + a1) = psi(u) + a1_V."""
    source = witness.source
    gate = check_hom(psi, source, v, "d-ertex")
    if not gate.passed:
        raise PreconditionFailed("psi is not a D-ertex homomorphism", gate)
    if v.vacuum is None or e2.vacuum is None:
        raise PreconditionFailed("both algebras need a vacuum", Report().check("hom_vacuum"))
    columns = [dict(witness.inclusion(VectorElem.basis(s)).items()) for s in source.basis]
    columns.append({e2.vacuum: Fraction(1)})
    images = {}
    for b in e2.basis:
        c = solve(columns, {b: Fraction(1)})
        if c is None:
            raise PreconditionFailed(f"{b} is not in the span of i(source) and the vacuum",
                                     Report().check("factorization"))
        img = VectorElem.sum(psi(VectorElem.basis(s)) * x for s, x in zip(source.basis, c))
        images[b] = img + VectorElem.basis(v.vacuum) * c[-1]
    phi = LinearMap(images)
    report = check_hom(phi, e2, v, "vertex").merge(check_commutes(phi, witness.inclusion, psi, source.basis))
    return phi, report


def derivative_orbit(psi: LinearMap, e: Presentation, v: Presentation
                     ) -> Tuple[Presentation, LinearMap, Report]:
    """The span of D_V^n psi(e_i) as a sub-presentation of ``v``.

    Returns the sub-presentation on fresh basis names, its embedding into v,
    and a report listing any failure of the span to be closed under Y_V.
    """
    D = derivation_of(v)
    spanning: List[VectorElem] = []
    for i in e.basis:
        for w in derivation_powers(D, psi(VectorElem.basis(i)), v.nilpotence_bound):
            cols = [dict(s.items()) for s in spanning]
            if solve(cols, dict(w.items())) is None:
                spanning.append(w)
    names = [f"w{k}" for k in range(len(spanning))]
    cols = [dict(s.items()) for s in spanning]
    report = Report().check("orbit_closed")
    modes = {}
    for a, sa in zip(names, spanning):
        for b, sb in zip(names, spanning):
            for idx, vec in vertex_series(v, sa, sb, "x").items():
                c = solve(cols, dict(vec.items()))
                n = -mi_get(idx, "x") - 1
                if c is None:
                    report.add(Violation("orbit_closed", (a, b, n), actual=vec,
                                         detail="mode leaves the derivative orbit span"))
                    continue
                modes[(a, b, n)] = VectorElem(dict(zip(names, c)))
    sub = Presentation(f"{v.name}-orbit", "ertex", tuple(names), modes, None, None, None, v.nilpotence_bound)
    return sub, LinearMap(dict(zip(names, spanning))), report


def check_d_injective(psi: LinearMap, e: Presentation, v: Presentation) -> Report:
    """Certificate that the derivative orbit of psi(E) is an injective ertex algebra."""
    sub, emb, report = derivative_orbit(psi, e, v)
    report.check("d_injectivity")
    if report.passed:
        for viol in check_injectivity(sub).violations:
            witness = emb(viol.actual)
            report.add(Violation("d_injectivity", tuple(sorted(witness.support())), actual=witness,
                                 detail=f"Y_V({witness}, x) vanishes on the derivative orbit"))
    return report


def factor_through_closure(e1: Presentation, trace: ClosureTrace, witness: EmbeddingWitness,
                           v: Presentation, psi: LinearMap) -> Tuple[LinearMap, Report]:
    """The D-ertex homomorphism phi(D^[n] e_l) = D_V^n psi(e_l)."""
    source = witness.source
    gate = check_hom(psi, source, v, "ertex")
    if gate.passed:
        try:
            derivation_of(v)
        except NotApplicable as exc:
            gate.fail("hom_derivation", str(exc))
    if gate.passed:
        gate.merge(check_d_injective(psi, source, v))
    if not gate.passed:
        raise PreconditionFailed("psi is not a D-injective ertex homomorphism", gate)
    D = derivation_of(v)
    images = {}
    for (i, n), name in trace.names.items():
        w = psi(VectorElem.basis(i))
        for _ in range(n):
            w = D(w)
        images[name] = w
    phi = LinearMap({b: images[b] for b in e1.basis})
    report = check_hom(phi, e1, v, "d-ertex").merge(check_commutes(phi, witness.inclusion, psi, source.basis))
    return phi, report


# --------------------------------------------------------------------------
# the full embedding ertex -> D-ertex -> vertex


@dataclass(frozen=True)
class Embedding:
    closure: Presentation
    closure_witness: EmbeddingWitness
    trace: ClosureTrace
    vertex: Presentation
    vertex_witness: EmbeddingWitness

    @property
    def witness(self) -> EmbeddingWitness:
        inc = self.vertex_witness.inclusion.compose(self.closure_witness.inclusion)
        return EmbeddingWitness(self.closure_witness.source, self.vertex, inc)


def embed(p: Presentation, max_order: int = DEFAULT_MAX_ORDER) -> Embedding:
    e1, w1, trace = d_closure(p, max_order)
    e2, w2 = adjoin_vacuum(e1)
    return Embedding(e1, w1, trace, e2, w2)


def factor_through_embedding(emb: Embedding, v: Presentation, psi: LinearMap) -> Tuple[LinearMap, Report]:
    """Extend an ertex homomorphism psi: E -> V (V a vertex algebra) to the
    embedded vertex algebra, first over the closure and then over the vacuum."""
    v_d = forget(v, "vacuum-role") if v.kind == "vertex" else v
    xi, first = factor_through_closure(emb.closure, emb.trace, emb.closure_witness, v_d, psi)
    phi, second = factor_through_vacuum(emb.vertex, emb.vertex_witness, v, xi)
    wit = emb.witness
    report = Report.combine([first, second, check_commutes(phi, wit.inclusion, psi, wit.source.basis)])
    return phi, report
