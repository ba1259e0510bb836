"""Finite presentations of ertex, D-ertex and vertex algebras.

A presentation lists a basis and its structure constants: the mode table
entry ``(i, j, n)`` is ``(e_i)_n e_j``, the coefficient of ``x^(-n-1)`` in
``Y(e_i, x) e_j``. Unlisted modes are zero, so every ``Y(u, x) v`` is a
vector-valued Laurent polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, Mapping, Optional, Tuple, Union

from .errors import NilpotenceBoundExceeded, NotApplicable, UnknownBasisId
from .formal_calculus import LaurentPoly, derive, multi_index
from .linear_space import BasisId, LinearMap, VectorElem
from .report import Report, Violation

KINDS = ("ertex", "d-ertex", "vertex")
DEFAULT_NILPOTENCE_BOUND = 16

# Vector-valued Laurent polynomials share the LaurentPoly implementation.
VLaurentPoly = LaurentPoly
ModeKey = Tuple[BasisId, BasisId, int]
Element = Union[VectorElem, BasisId]


@dataclass(frozen=True)
class Presentation:
    name: str
    kind: str
    basis: Tuple[BasisId, ...]
    modes: Mapping[ModeKey, VectorElem] = field(default_factory=dict)
    derivation: Optional[LinearMap] = None
    vacuum: Optional[BasisId] = None
    # optional declared bounds (lo, hi) on the mode index n for each pair (i, j)
    support: Optional[Mapping[Tuple[BasisId, BasisId], Tuple[int, int]]] = None
    nilpotence_bound: int = DEFAULT_NILPOTENCE_BOUND

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "modes", {k: v for k, v in dict(self.modes).items() if v})

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def position(self) -> Dict[BasisId, int]:
        return {b: i for i, b in enumerate(self.basis)}

    @cached_property
    def table(self) -> Dict[Tuple[BasisId, BasisId], Dict[int, VectorElem]]:
        out: Dict[Tuple[BasisId, BasisId], Dict[int, VectorElem]] = {}
        for (i, j, n), v in self.modes.items():
            out.setdefault((i, j), {})[n] = v
        return out

    def with_(self, **changes) -> "Presentation":
        return replace(self, **changes)

    def element(self, u: Element) -> VectorElem:
        if isinstance(u, VectorElem):
            return u
        if u not in self.position:
            raise UnknownBasisId(f"{u!r} is not a basis element of {self.name}")
        return VectorElem.basis(u)

    def mode_support(self, i: BasisId, j: BasisId) -> Optional[Tuple[int, int]]:
        entries = self.table.get((i, j))
        if not entries:
            return None
        return min(entries), max(entries)


def _check_known(p: Presentation, v: VectorElem) -> None:
    for b in v:
        if b not in p.position:
            raise UnknownBasisId(f"{b!r} is not a basis element of {p.name}")


def vertex_series(p: Presentation, u: Element, v: Element, var: str = "x") -> LaurentPoly:
    """Y(u, var) v as a vector-valued Laurent polynomial in ``var``."""
    u = p.element(u)
    v = p.element(v)
    _check_known(p, u)
    _check_known(p, v)
    out: Dict = {}
    table = p.table
    for i, a in u.items():
        for j, b in v.items():
            entries = table.get((i, j))
            if not entries:
                continue
            c = a * b
            for n, w in entries.items():
                idx = ((var, -n - 1),) if n != -1 else ()
                out.setdefault(idx, []).append(w * c)
    return LaurentPoly({idx: VectorElem.sum(ws) for idx, ws in out.items()})


def mode_apply(p: Presentation, u: Element, n: int, v: Element) -> VectorElem:
    """u_n v, the coefficient of x^(-n-1) in Y(u, x) v."""
    series = vertex_series(p, u, v, "x")
    return series.coeff(multi_index(x=-n - 1), VectorElem())


def apply_operator(p: Presentation, u: Element, series: LaurentPoly, var: str) -> LaurentPoly:
    """Y(u, var) applied coefficientwise to a vector-valued series."""
    out = LaurentPoly()
    for idx, vec in series.items():
        out = out + vertex_series(p, u, vec, var).times_monomial(idx)
    return out


def operator_of_series(p: Presentation, series: LaurentPoly, w: Element, var: str) -> LaurentPoly:
    """Y(series, var) w for a vector-valued series (e.g. Y(Y(u, x0) v, x2) w)."""
    out = LaurentPoly()
    for idx, vec in series.items():
        out = out + vertex_series(p, vec, w, var).times_monomial(idx)
    return out


# --------------------------------------------------------------------------
# derivations


def canonical_derivation(p: Presentation) -> LinearMap:
    """v -> v_{-2} 1, the derivative operator of a vertex algebra."""
    if p.vacuum is None:
        raise NotApplicable(f"{p.name} has no vacuum vector")
    return LinearMap({b: mode_apply(p, b, -2, p.vacuum) for b in p.basis})


def derivation_of(p: Presentation) -> LinearMap:
    """The given derivation, or the canonical one of a vertex algebra."""
    if p.derivation is not None:
        return p.derivation
    if p.kind == "vertex" and p.vacuum is not None:
        return canonical_derivation(p)
    raise NotApplicable(f"{p.name} carries no derivation")


def derivation_powers(D: LinearMap, v: VectorElem, bound: int = DEFAULT_NILPOTENCE_BOUND):
    """[v, Dv, D^2 v, ...] up to the last nonzero power."""
    powers = []
    cur = v
    while cur:
        if len(powers) >= bound:
            raise NilpotenceBoundExceeded(f"D^{bound} does not vanish on {v}")
        powers.append(cur)
        cur = D(cur)
    return powers


def exp_D(p: Presentation, v: Element, shift: str = "z", D: Optional[LinearMap] = None) -> LaurentPoly:
    """exp(shift * D) v = sum_k shift^k / k! D^k v, a polynomial in ``shift``."""
    D = D if D is not None else derivation_of(p)
    v = p.element(v)
    out = {}
    fact = 1
    for k, w in enumerate(derivation_powers(D, v, p.nilpotence_bound)):
        if k:
            fact *= k
        out[((shift, k),) if k else ()] = w * Fraction(1, fact)
    return LaurentPoly(out)


def apply_exp_D(D: LinearMap, series: LaurentPoly, shift: str, bound: int = DEFAULT_NILPOTENCE_BOUND,
                sign: int = 1) -> LaurentPoly:
    """exp(sign * shift * D) applied to every coefficient of ``series``."""
    out = LaurentPoly()
    term = series
    k = 0
    while term:
        if k >= bound:
            raise NilpotenceBoundExceeded(f"D^{bound} does not vanish on the series coefficients")
        out = out + term.times_monomial(((shift, k),) if k else (), Fraction(sign) ** k)
        k += 1
        term = term.map_coeffs(D) * Fraction(1, k)
    return out


def d_minus_d_dx(D: LinearMap, series: LaurentPoly, var: str) -> LaurentPoly:
    """(D - d/dvar) applied to a vector-valued series."""
    return series.map_coeffs(D) - derive(series, var)


# --------------------------------------------------------------------------
# structural validation


def validate(p: Presentation) -> Report:
    report = Report().check("structure")

    def bad(detail, elements=()):
        report.add(Violation("structure", tuple(elements), detail=detail))

    if p.kind not in KINDS:
        bad(f"unknown kind {p.kind!r}")
    if not p.basis:
        bad("empty basis")
    if len(set(p.basis)) != len(p.basis):
        bad("duplicate basis identifiers")
    known = set(p.basis)
    for (i, j, n), v in sorted(p.modes.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]), kv[0][2])):
        if i not in known or j not in known or not v.support() <= known:
            bad("mode entry references an unknown basis element", (i, j, n))
    if p.vacuum is not None and p.vacuum not in known:
        bad(f"vacuum {p.vacuum!r} is not in the basis")
    if p.kind == "d-ertex" and p.derivation is None:
        bad("derivation required")
    if p.kind == "vertex" and p.vacuum is None:
        bad("vacuum required")
    if p.derivation is not None:
        D = p.derivation
        if set(D.images) != known:
            bad("derivation must be given on every basis element")
        for b, img in D.images.items():
            if not img.support() <= known:
                bad("derivation image outside the basis", (b,))
        if report.passed:
            for b in p.basis:
                try:
                    derivation_powers(D, VectorElem.basis(b), p.nilpotence_bound)
                except NilpotenceBoundExceeded:
                    bad(f"derivation not nilpotent within {p.nilpotence_bound} steps", (b,))
            if p.kind == "vertex" and p.vacuum in known:
                for b in p.basis:
                    canon = mode_apply(p, b, -2, p.vacuum)
                    if D(VectorElem.basis(b)) != canon:
                        report.add(Violation("structure", (b,), expected=canon,
                                             actual=D(VectorElem.basis(b)),
                                             detail="derivation mismatch"))
    return report
