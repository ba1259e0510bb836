"""Independent mode-level restatements of the axioms.

Each function works only with ``mode_apply`` and the derivation, so it shares
no code with the series-level checkers it is compared against.
"""

from __future__ import annotations

from math import factorial
from typing import Iterator, Tuple

from ertex.algebra_model import mode_apply
from ertex.formal_calculus import binom
from ertex.linear_space import VectorElem

WINDOW = range(-5, 2)


def top_mode(p) -> int:
    return max((n for (_, _, n) in p.modes), default=-1)


def borcherds_failures(p, window=WINDOW, triples=None) -> Iterator[Tuple]:
    """Yield (u, v, w, l, m, n) where

    sum_i C(m,i) (u_{l+i} v)_{m+n-i} w
      = sum_i (-1)^i C(l,i) (u_{l+m-i} v_{n+i} w - (-1)^l v_{l+n-i} u_{m+i} w)

    fails. Every sum is cut where the modes provably vanish.
    """
    top = top_mode(p)
    if triples is None:
        triples = [(u, v, w) for u in p.basis for v in p.basis for w in p.basis]
    for u, v, w in triples:
        for l in window:
            for m in window:
                for n in window:
                    lhs = VectorElem()
                    for i in range(0, max(0, top - l) + 1):
                        c = binom(m, i)
                        if c:
                            inner = mode_apply(p, u, l + i, v)
                            lhs = lhs + mode_apply(p, inner, m + n - i, w) * c
                    rhs = VectorElem()
                    for i in range(0, max(0, top - min(n, m)) + 1):
                        c = binom(l, i)
                        if not c:
                            continue
                        sign = -1 if i % 2 else 1
                        first = mode_apply(p, u, l + m - i, mode_apply(p, v, n + i, w))
                        second = mode_apply(p, v, l + n - i, mode_apply(p, u, m + i, w))
                        rhs = rhs + (first - second * (-1 if l % 2 else 1)) * (c * sign)
                    if lhs != rhs:
                        yield (u, v, w, l, m, n)


def divided_power(D, v: VectorElem, j: int) -> VectorElem:
    for _ in range(j):
        v = D(v)
    return v / factorial(j)


def skew_failures(p, D, window=WINDOW) -> Iterator[Tuple]:
    """u_n v = sum_j (-1)^(n+j+1) D^(j)(v_{n+j} u)."""
    top = top_mode(p)
    for u in p.basis:
        for v in p.basis:
            for n in window:
                rhs = VectorElem()
                for j in range(0, max(0, top - n) + 1):
                    sign = -1 if (n + j + 1) % 2 else 1
                    rhs = rhs + divided_power(D, mode_apply(p, v, n + j, u), j) * sign
                if mode_apply(p, u, n, v) != rhs:
                    yield (u, v, n)


def derivative_failures(p, D, window=WINDOW) -> Iterator[Tuple]:
    """(Du)_n v = -n u_(n-1) v."""
    for u in p.basis:
        du = D(VectorElem.basis(u))
        for v in p.basis:
            for n in window:
                if mode_apply(p, du, n, v) != mode_apply(p, u, n - 1, v) * (-n):
                    yield (u, v, n)


def bracket_failures(p, D, window=WINDOW) -> Iterator[Tuple]:
    """D(u_n v) - u_n(Dv) = -n u_(n-1) v."""
    for u in p.basis:
        for v in p.basis:
            dv = D(VectorElem.basis(v))
            for n in window:
                lhs = D(mode_apply(p, u, n, v)) - mode_apply(p, u, n, dv)
                if lhs != mode_apply(p, u, n - 1, v) * (-n):
                    yield (u, v, n)
