"""Seeded single-entry corruptions of a presentation's mode and D tables."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator, Tuple

from ertex.algebra_model import Presentation
from ertex.linear_space import LinearMap, VectorElem

SCALARS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-3), Fraction(1, 2))


def mutations(p: Presentation, count: int, seed: int = 0,
              n_range: Tuple[int, int] = (-4, 0)) -> Iterator[Tuple[str, Presentation]]:
    """Yield ``count`` distinct corruptions, each changing exactly one entry.

    A mode entry (i, j, n) or a D image gets a basis vector added with a
    nonzero scalar. Mode keys are drawn from the whole box basis^2 x n_range,
    so both existing entries and fresh ones are hit.
    """
    rng = random.Random(seed)
    seen = set()
    lo, hi = n_range
    attempts = 0
    while len(seen) < count:
        attempts += 1
        if attempts > 100 * count:
            raise RuntimeError("not enough distinct mutations")
        b = rng.choice(p.basis)
        c = rng.choice(SCALARS)
        if p.derivation is not None and rng.random() < 0.25:
            target = rng.choice(p.basis)
            key = ("D", target, b, c)
            if key in seen:
                continue
            seen.add(key)
            images = dict(p.derivation.images)
            images[target] = images[target] + VectorElem.basis(b, c)
            yield f"D {target} += {c}*{b}", p.with_(derivation=LinearMap(images))
            continue
        i, j = rng.choice(p.basis), rng.choice(p.basis)
        n = rng.randint(lo, hi)
        key = ("mode", i, j, n, b, c)
        if key in seen:
            continue
        seen.add(key)
        modes = dict(p.modes)
        modes[(i, j, n)] = modes.get((i, j, n), VectorElem()) + VectorElem.basis(b, c)
        yield f"mode {i} {j} {n} += {c}*{b}", p.with_(modes=modes)
