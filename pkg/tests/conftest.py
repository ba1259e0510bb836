from __future__ import annotations

from fractions import Fraction

import pytest

from ertex.formal_calculus import LaurentPoly, multi_index
from ertex.linear_space import LinearMap, VectorElem


def vec(**coords) -> VectorElem:
    return VectorElem({b: Fraction(c) for b, c in coords.items()})


def series(var: str = "x", **terms) -> LaurentPoly:
    """Build a vector-valued series from keyword pairs like e1=vec(t=1)
    meaning x^1 t; ``e_1`` stands for exponent -1."""
    out = {}
    for key, v in terms.items():
        exp = -int(key[2:]) if key.startswith("e_") else int(key[1:])
        out[multi_index({var: exp})] = v
    return LaurentPoly(out)


def identity_on(p) -> LinearMap:
    return LinearMap.identity(p.basis)


@pytest.fixture
def f1():
    from ertex.fixtures import commutative_va
    return commutative_va(3)


@pytest.fixture
def naive3():
    from ertex.fixtures import naive_truncated_va
    return naive_truncated_va(3)


@pytest.fixture
def strip3():
    from ertex.fixtures import strip_to_ertex
    return strip_to_ertex(3)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
