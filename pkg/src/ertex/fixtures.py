"""Small example algebras on the truncated polynomial space C[t]/(t^k).

Every fixture uses the basis ``one, t, t2, ..., t{k-1}`` and the commutative
recipe Y(u, x)v = (e^{xD}u) v for a chosen operator D.

* :func:`commutative_va` takes D = t^2 d/dt. This D is a nilpotent
  derivation of C[t]/(t^k), so the result is a genuine vertex algebra.
* :func:`naive_truncated_va` takes D = d/dt. This D does not preserve the
  ideal (t^k), so the mode table breaks the Jacobi identity and
  skew-symmetry. It is kept because its vacuum-free part is the smallest
  injective presentation with a nontrivial derivative closure.
* :func:`strip_to_ertex` is the vacuum-free part of the naive table.
"""

from __future__ import annotations

from math import comb
from typing import Dict, Tuple

from .algebra_model import KINDS, Presentation
from .axiom_checker import check_injectivity
from .constructions import forget
from .errors import PreconditionFailed
from .linear_space import LinearMap, VectorElem

MAX_K = 12


def power_name(a: int) -> str:
    return "one" if a == 0 else ("t" if a == 1 else f"t{a}")


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool) or not 2 <= k <= MAX_K:
        raise ValueError(f"k must be an integer in [2, {MAX_K}], got {k!r}")


def _from_shifts(name: str, k: int, shift: Dict[int, Dict[int, int]], D: LinearMap) -> Presentation:
    """Modes of Y(t^a, x)t^b = (sum_j x^j shift[a][j] t^(a_j)) t^b, where
    ``shift[a]`` maps j to (coefficient, exponent) of the x^j term of e^{xD}t^a."""
    basis = tuple(power_name(a) for a in range(k))
    modes = {}
    for a in range(k):
        for j, (c, e) in shift[a].items():
            for b in range(k):
                if c and e + b < k:
                    modes[(basis[a], basis[b], -j - 1)] = VectorElem.basis(basis[e + b], c)
    return Presentation(name, "vertex", basis, modes, D, basis[0])


def commutative_va(k: int) -> Presentation:
    """C[t]/(t^k) with D = t^2 d/dt, vacuum 1 and Y(u, x)v = (e^{xD}u) v.

    e^{xD} t^a = t^a (1 - x t)^(-a) = sum_j C(a+j-1, j) x^j t^(a+j).
    """
    _check_k(k)
    shift = {0: {0: (1, 0)}}
    for a in range(1, k):
        shift[a] = {j: (comb(a + j - 1, j), a + j) for j in range(k - a)}
    D = LinearMap({power_name(a): (VectorElem.basis(power_name(a + 1), a) if 0 < a < k - 1 else VectorElem())
                   for a in range(k)})
    return _from_shifts(f"trunc{k}", k, shift, D)


def naive_truncated_va(k: int) -> Presentation:
    """C[t]/(t^k) with Y(t^a, x)t^b = ((t + x)^a t^b mod t^k) and D = d/dt.

    Not a vertex algebra: the vertex operators expand (t + x)^a before
    reducing, which only agrees with a derivation when t^k stays nonzero.
    """
    _check_k(k)
    shift = {a: {a - i: (comb(a, i), i) for i in range(a + 1)} for a in range(k)}
    D = LinearMap({power_name(a): (VectorElem.basis(power_name(a - 1), a) if a else VectorElem())
                   for a in range(k)})
    return _from_shifts(f"naive{k}", k, shift, D)


def strip_to_ertex(k: int) -> Presentation:
    """The span of t, ..., t^(k-1) in the naive table.

    Injective for every k, since Y(t^a, x)t^b carries the term x^a t^b, and
    not closed under d/dt since d/dt t = 1.
    """
    _check_k(k)
    p = forget(naive_truncated_va(k), "vacuum-element").with_(name=f"strip{k}")
    report = check_injectivity(p)
    if not report.passed:
        raise PreconditionFailed(f"strip_to_ertex({k}) is not injective: {report.violations[0].detail}",
                                 report)
    return p


def zero_algebra(dim: int = 1, kind: str = "ertex") -> Presentation:
    """All modes zero (and D = 0 when a derivation is needed)."""
    if kind not in KINDS or kind == "vertex":
        raise ValueError("zero algebras are ertex or d-ertex presentations")
    basis = tuple(f"e{i}" for i in range(dim))
    D = LinearMap({b: VectorElem() for b in basis}) if kind == "d-ertex" else None
    return Presentation(f"zero{dim}", kind, basis, {}, D)


FIXTURES: Dict[str, Tuple[str, object]] = {
    "commutative-va": ("genuine vertex algebra C[t]/(t^k), D = t^2 d/dt", commutative_va),
    "naive": ("the (t + x)^a table with D = d/dt; fails the Jacobi identity", naive_truncated_va),
    "strip": ("vacuum-free part of the naive table", strip_to_ertex),
}
