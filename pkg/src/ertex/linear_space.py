"""Exact finite-dimensional linear algebra over the rationals."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import UnknownBasisId
from .formal_calculus import LaurentPoly
from .report import Report, Violation

BasisId = str


class VectorElem:
    """Immutable finitely supported vector ``{basis id: coefficient}``."""

    __slots__ = ("_coords", "_hash")

    def __init__(self, coords: Optional[Mapping[BasisId, object]] = None):
        self._coords: Dict[BasisId, Fraction] = {}
        if coords:
            for b, c in coords.items():
                if c:
                    self._coords[b] = c if isinstance(c, Fraction) else Fraction(c)
        self._hash = None

    @classmethod
    def _wrap(cls, coords):
        v = cls.__new__(cls)
        v._coords = coords
        v._hash = None
        return v

    @classmethod
    def basis(cls, b: BasisId, c=1) -> "VectorElem":
        return cls({b: c})

    @classmethod
    def sum(cls, vectors: Iterable["VectorElem"]) -> "VectorElem":
        out: Dict[BasisId, Fraction] = {}
        for v in vectors:
            for b, c in v._coords.items():
                s = out.get(b, 0) + c
                if s:
                    out[b] = s
                else:
                    out.pop(b, None)
        return cls._wrap(out)

    def coord(self, b: BasisId) -> Fraction:
        return self._coords.get(b, Fraction(0))

    def items(self):
        return self._coords.items()

    def support(self) -> frozenset:
        return frozenset(self._coords)

    def __iter__(self):
        return iter(self._coords)

    def __len__(self) -> int:
        return len(self._coords)

    def __bool__(self) -> bool:
        return bool(self._coords)

    def __add__(self, other):
        if isinstance(other, VectorElem):
            if not other._coords:
                return self
            if not self._coords:
                return other
            return VectorElem.sum((self, other))
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return VectorElem._wrap({b: -c for b, c in self._coords.items()})

    def __sub__(self, other):
        if isinstance(other, VectorElem):
            return self + (-other)
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            if not scalar:
                return VectorElem()
            return VectorElem._wrap({b: c * scalar for b, c in self._coords.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (Fraction(1) / scalar)

    def __eq__(self, other):
        if isinstance(other, VectorElem):
            return self._coords == other._coords
        if isinstance(other, int) and other == 0:
            return not self._coords
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._coords.items()))
        return self._hash

    def format(self, order: Optional[Sequence[BasisId]] = None) -> str:
        """Render as ``TERM + TERM`` in the definition-file syntax."""
        if not self._coords:
            return "0"
        if order is None:
            keys = sorted(self._coords)
        else:
            rank = {b: i for i, b in enumerate(order)}
            keys = sorted(self._coords, key=lambda b: (rank.get(b, len(rank)), b))
        pieces = []
        for b in keys:
            c = self._coords[b]
            pieces.append(b if c == 1 else f"{c}*{b}")
        return " + ".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"VectorElem({self.format()})"


class LinearMap:
    """Linear map given by the images of a domain basis."""

    def __init__(self, images: Mapping[BasisId, VectorElem]):
        self.images: Dict[BasisId, VectorElem] = dict(images)

    @classmethod
    def identity(cls, basis: Iterable[BasisId]) -> "LinearMap":
        return cls({b: VectorElem.basis(b) for b in basis})

    @property
    def domain(self) -> Tuple[BasisId, ...]:
        return tuple(self.images)

    def __call__(self, v: VectorElem) -> VectorElem:
        return apply_linear(self, v)

    def apply_series(self, series: LaurentPoly) -> LaurentPoly:
        """Apply the map to every coefficient of a vector-valued polynomial."""
        return series.map_coeffs(self)

    def compose(self, inner: "LinearMap") -> "LinearMap":
        """self after inner."""
        return LinearMap({b: self(v) for b, v in inner.images.items()})

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        keys = set(self.images) | set(other.images)
        return all(self.images.get(k, VectorElem()) == other.images.get(k, VectorElem()) for k in keys)

    def __repr__(self):
        body = ", ".join(f"{b} -> {v}" for b, v in self.images.items())
        return f"LinearMap({body})"


def apply_linear(m: LinearMap, v: VectorElem) -> VectorElem:
    pieces = []
    for b, c in v.items():
        try:
            image = m.images[b]
        except KeyError:
            raise UnknownBasisId(f"{b!r} is not in the domain of the map") from None
        pieces.append(image * c)
    return VectorElem.sum(pieces)


# --------------------------------------------------------------------------
# elimination


def row_reduce(rows: List[List[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form (in place on a copy) and the pivot columns."""
    rows = [list(r) for r in rows]
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(columns: Sequence[Mapping[Hashable, Fraction]]) -> List[List[Fraction]]:
    """Basis of {c : sum_k c_k * columns[k] = 0}, each vector scaled so its
    first nonzero entry is positive and all entries are integers."""
    keys = sorted({key for col in columns for key in col}, key=repr)
    n = len(columns)
    rows = [[Fraction(col.get(key, 0)) for col in columns] for key in keys]
    reduced, pivots = row_reduce(rows, n)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(_normalize(vec))
    return basis


def _normalize(vec: List[Fraction]) -> List[Fraction]:
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    g = g or 1
    lead = next((x for x in ints if x), 1)
    sign = 1 if lead > 0 else -1
    return [Fraction(sign * x, g) for x in ints]


def rank(columns: Sequence[Mapping[Hashable, Fraction]]) -> int:
    return len(columns) - len(nullspace(columns))


def solve(columns: Sequence[Mapping[Hashable, Fraction]],
          target: Mapping[Hashable, Fraction]) -> Optional[List[Fraction]]:
    """Some c with sum_k c_k * columns[k] == target, or None if infeasible.

    Free variables are set to zero, so the answer is unique whenever the
    columns are independent.
    """
    keys = sorted({key for col in columns for key in col} | set(target), key=repr)
    n = len(columns)
    rows = [[Fraction(col.get(key, 0)) for col in columns] + [Fraction(target.get(key, 0))]
            for key in keys]
    reduced, pivots = row_reduce(rows, n + 1)
    if n in pivots:
        return None
    out = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        out[p] = row[n]
    return out


# --------------------------------------------------------------------------
# series families


class SeriesFamily:
    """The series a candidate operator produces on each probe basis vector."""

    def __init__(self, action: Mapping[BasisId, LaurentPoly]):
        self.action: Dict[BasisId, LaurentPoly] = dict(action)

    def probes(self) -> frozenset:
        return frozenset(self.action)

    def flatten(self) -> Dict[tuple, Fraction]:
        """Coordinates keyed by (probe, monomial, output basis id)."""
        out = {}
        for probe, series in self.action.items():
            for idx, vec in series.items():
                for b, c in vec.items():
                    out[(probe, idx, b)] = c
        return out

    def map(self, fn) -> "SeriesFamily":
        return SeriesFamily({p: fn(s) for p, s in self.action.items()})

    def __add__(self, other: "SeriesFamily") -> "SeriesFamily":
        keys = set(self.action) | set(other.action)
        zero = LaurentPoly()
        return SeriesFamily({k: self.action.get(k, zero) + other.action.get(k, zero) for k in keys})

    def __mul__(self, c) -> "SeriesFamily":
        return SeriesFamily({p: s * c for p, s in self.action.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesFamily):
            return NotImplemented
        return self.flatten() == other.flatten()

    def __bool__(self) -> bool:
        return any(self.action.values())


def _check_probes(families: Sequence[SeriesFamily]) -> None:
    probes = {f.probes() for f in families}
    if len(probes) > 1:
        raise ValueError("series families must share one probe basis")


def solve_membership(target: SeriesFamily, span: Sequence[SeriesFamily]) -> Optional[List[Fraction]]:
    """Coefficients c with target == sum c_k span[k], or None."""
    _check_probes([target, *span])
    return solve([s.flatten() for s in span], target.flatten())


def check_injective_family(members: Sequence[SeriesFamily]) -> Report:
    """Pass iff no nontrivial rational combination of ``members`` vanishes."""
    _check_probes(members)
    report = Report().check("injective_family")
    for vec in nullspace([m.flatten() for m in members]):
        report.add(Violation("injective_family", detail="vanishing combination " +
                             "(" + ", ".join(str(c) for c in vec) + ")", actual=tuple(vec)))
    return report
