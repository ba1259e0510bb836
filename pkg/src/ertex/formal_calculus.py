"""Exact formal calculus in commuting variables.

Monomials are multi-indices: sorted tuples of ``(variable, exponent)`` pairs
with the zero exponents omitted, so that equal monomials are equal tuples.
:class:`LaurentPoly` is a finitely supported map from multi-indices to
coefficients. Coefficients are usually :class:`fractions.Fraction`, but any
exact additive type that can be scaled by a rational works (vector-valued
polynomials reuse the same class with vector coefficients).

Infinite series only ever enter through delta kernels, which stay symbolic in
:class:`DeltaExpr` and are expanded coefficient by coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import HypothesisViolated, NonSummable
from .report import Report, Violation

Scalar = Fraction
MultiIndex = Tuple[Tuple[str, int], ...]

STANDARD_VARIABLES = ("x", "y", "z", "t", "x0", "x1", "x2")


# --------------------------------------------------------------------------
# multi-indices


def multi_index(exponents: Optional[Mapping[str, int]] = None, **kw: int) -> MultiIndex:
    exps = dict(exponents or {})
    exps.update(kw)
    return tuple(sorted((v, int(e)) for v, e in exps.items() if e))


def mi_get(idx: MultiIndex, var: str) -> int:
    for v, e in idx:
        if v == var:
            return e
    return 0


def mi_mul(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mi_div(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return mi_mul(a, tuple((v, -e) for v, e in b))


def mi_set(idx: MultiIndex, var: str, exp: int) -> MultiIndex:
    exps = dict(idx)
    exps[var] = exp
    return tuple(sorted((v, e) for v, e in exps.items() if e))


def mi_rename(idx: MultiIndex, old: str, new: str) -> MultiIndex:
    e = mi_get(idx, old)
    if not e:
        return idx
    rest = dict(idx)
    del rest[old]
    rest[new] = rest.get(new, 0) + e
    return tuple(sorted((v, x) for v, x in rest.items() if x))


# --------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Immutable, finitely supported formal Laurent polynomial.

    Zero coefficients are never stored, so ``==`` is mathematical equality.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[MultiIndex, Any]] = None):
        self._terms: Dict[MultiIndex, Any] = {}
        if terms:
            for idx, c in terms.items():
                if c:
                    self._terms[idx] = c
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Dict[MultiIndex, Any]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({(): c})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> "LaurentPoly":
        return cls({multi_index({name: exp}): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Optional[Mapping[str, int]] = None, c=Fraction(1)) -> "LaurentPoly":
        return cls({multi_index(exponents): c})

    # -- inspection --------------------------------------------------------

    def items(self) -> Iterator[Tuple[MultiIndex, Any]]:
        return iter(self._terms.items())

    @property
    def terms(self) -> Dict[MultiIndex, Any]:
        return dict(self._terms)

    def coeff(self, idx: MultiIndex, default=0):
        return self._terms.get(idx, default)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def variables(self) -> frozenset:
        return frozenset(v for idx in self._terms for v, _ in idx)

    def degree_range(self, var: str) -> Optional[Tuple[int, int]]:
        """(lowest, highest) exponent of ``var``; ``None`` for the zero polynomial."""
        if not self._terms:
            return None
        exps = [mi_get(idx, var) for idx in self._terms]
        return min(exps), max(exps)

    def min_degree(self, var: str, default: int = 0) -> int:
        r = self.degree_range(var)
        return default if r is None else r[0]

    def max_degree(self, var: str, default: int = 0) -> int:
        r = self.degree_range(var)
        return default if r is None else r[1]

    def component(self, key) -> "LaurentPoly":
        """Scalar polynomial of one coordinate of a vector-valued polynomial."""
        out = {}
        for idx, c in self._terms.items():
            x = c.coord(key)
            if x:
                out[idx] = x
        return LaurentPoly._wrap(out)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            if not other._terms:
                return self
            out = dict(self._terms)
            for idx, c in other._terms.items():
                s = out.get(idx)
                s = c if s is None else s + c
                if s:
                    out[idx] = s
                else:
                    out.pop(idx, None)
            return LaurentPoly._wrap(out)
        if isinstance(other, (int, Fraction)):
            return self + LaurentPoly.const(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._wrap({idx: -c for idx, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DeltaExpr):
            return NotImplemented
        if isinstance(other, LaurentPoly):
            out: Dict[MultiIndex, Any] = {}
            for a, ca in self._terms.items():
                for b, cb in other._terms.items():
                    idx = mi_mul(a, b)
                    prod = ca * cb
                    s = out.get(idx)
                    out[idx] = prod if s is None else s + prod
            return LaurentPoly(out)
        if not other:
            return LaurentPoly()
        return LaurentPoly({idx: c * other for idx, c in self._terms.items()})

    def __rmul__(self, other):
        if isinstance(other, LaurentPoly):
            return other.__mul__(self)
        if not other:
            return LaurentPoly()
        return LaurentPoly({idx: other * c for idx, c in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((idx, c),) = self._terms.items()
            return LaurentPoly({tuple((v, e * n) for v, e in idx): Fraction(1) / c ** (-n)})
        out = LaurentPoly.const(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def times_monomial(self, idx: MultiIndex, c=1) -> "LaurentPoly":
        if not c:
            return LaurentPoly()
        if c == 1:
            return LaurentPoly._wrap({mi_mul(m, idx): x for m, x in self._terms.items()})
        return LaurentPoly({mi_mul(m, idx): x * c for m, x in self._terms.items()})

    def map_coeffs(self, fn) -> "LaurentPoly":
        return LaurentPoly({idx: fn(c) for idx, c in self._terms.items()})

    def truncate(self, var: str, hi: int) -> "LaurentPoly":
        """Drop every term whose ``var`` exponent exceeds ``hi``."""
        return LaurentPoly._wrap({idx: c for idx, c in self._terms.items() if mi_get(idx, var) <= hi})

    def rename(self, old: str, new: str) -> "LaurentPoly":
        out: Dict[MultiIndex, Any] = {}
        for idx, c in self._terms.items():
            j = mi_rename(idx, old, new)
            s = out.get(j)
            out[j] = c if s is None else s + c
        return LaurentPoly(out)

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, c in self.sorted_items():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in idx)
            if isinstance(c, (int, Fraction)):
                if not mono:
                    pieces.append(str(c))
                elif c == 1:
                    pieces.append(mono)
                elif c == -1:
                    pieces.append("-" + mono)
                else:
                    pieces.append(f"{c}*{mono}")
            else:
                pieces.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(pieces).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


ZERO = LaurentPoly()
ONE = LaurentPoly.const(Fraction(1))


# --------------------------------------------------------------------------
# degree windows


@dataclass(frozen=True)
class DegreeWindow:
    """Inclusive exponent bounds per variable; unlisted variables get ``default``."""

    bounds: Mapping[str, Tuple[int, int]] = field(default_factory=dict)
    default: Tuple[int, int] = (-8, 8)

    def __post_init__(self):
        for var, (lo, hi) in dict(self.bounds).items():
            if lo > hi:
                raise ValueError(f"empty window for {var}: [{lo}, {hi}]")

    @classmethod
    def uniform(cls, n: int) -> "DegreeWindow":
        return cls({}, (-n, n))

    def range(self, var: str) -> Tuple[int, int]:
        return tuple(self.bounds.get(var, self.default))

    def with_bounds(self, **bounds: Tuple[int, int]) -> "DegreeWindow":
        merged = dict(self.bounds)
        merged.update(bounds)
        return DegreeWindow(merged, self.default)

    def contains(self, idx: MultiIndex) -> bool:
        for v, e in idx:
            lo, hi = self.range(v)
            if not lo <= e <= hi:
                return False
        return True

    def indices(self, variables: Iterable[str]) -> Iterator[MultiIndex]:
        """Every multi-index over ``variables`` inside the window."""
        variables = sorted(set(variables))

        def rec(i, acc):
            if i == len(variables):
                yield multi_index(acc)
                return
            lo, hi = self.range(variables[i])
            for e in range(lo, hi + 1):
                acc[variables[i]] = e
                yield from rec(i + 1, acc)

        yield from rec(0, {})


DEFAULT_WINDOW = DegreeWindow()


# --------------------------------------------------------------------------
# binomial expansion, derivatives, Taylor shifts, residues


def binom(n: int, k: int) -> int:
    """Generalized binomial coefficient n(n-1)...(n-k+1)/k! for any integer n."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


def expand_power(first: str, second: str, sign: int, n: int,
                 window: Optional[DegreeWindow] = None) -> LaurentPoly:
    """(first + sign*second)^n in nonnegative powers of ``second``.

    For n >= 0 the expansion is finite and returned whole. For n < 0 it is
    truncated above the window's upper bound for ``second``.
    """
    if first == second:
        raise ValueError("expansion variables must differ")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n >= 0:
        top = n
    else:
        top = (window or DEFAULT_WINDOW).range(second)[1]
    out = {}
    for k in range(0, top + 1):
        out[multi_index({first: n - k, second: k})] = Fraction(binom(n, k) * sign ** k)
    return LaurentPoly(out)


def _falling(e: int, order: int) -> int:
    out = 1
    for i in range(order):
        out *= e - i
    return out


def derive(p: LaurentPoly, v: str, order: int = 1) -> LaurentPoly:
    """Apply d/dv ``order`` times."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order == 0:
        return p
    out = {}
    for idx, c in p.items():
        e = mi_get(idx, v)
        f = _falling(e, order)
        if f:
            out[mi_set(idx, v, e - order)] = c * f
    return LaurentPoly(out)


def taylor_shift(p: LaurentPoly, v: str, shift: str,
                 window: Optional[DegreeWindow] = None, sign: int = 1) -> LaurentPoly:
    """exp(sign*shift*d/dv) p, that is p with v replaced by v + sign*shift.

    The result is exact whenever the exponential series terminates (p is a
    polynomial in v). Otherwise it is computed modulo ``shift^(hi+1)`` where
    ``hi`` is the window's upper bound for ``shift``; this truncation commutes
    with products and with further shifts.
    """
    if v == shift:
        raise ValueError("cannot shift a variable by itself")
    hi = (window or DEFAULT_WINDOW).range(shift)[1]
    low = p.min_degree(shift)
    result = ZERO
    term = p
    k = 0
    truncated = False
    while term:
        if k > hi - low:
            truncated = True
            break
        result = result + term.times_monomial(((shift, k),) if k else (), Fraction(sign) ** k)
        k += 1
        term = derive(term, v) * Fraction(1, k)
    return result.truncate(shift, hi) if truncated else result


def rename(p: LaurentPoly, old: str, new: str) -> LaurentPoly:
    return p.rename(old, new)


# --------------------------------------------------------------------------
# delta kernels


@dataclass(frozen=True)
class DeltaKernel:
    """denom^-1 * delta((first_sign*first + second_sign*second)/denom).

    The numerator is expanded by the binomial expansion convention, i.e. in
    nonnegative powers of ``second``:

        sum_{n in Z} sum_{k >= 0} binom(n,k) s1^(n-k) s2^k first^(n-k) second^k denom^(-n-1)
    """

    denom: str
    first: str
    second: str
    first_sign: int = 1
    second_sign: int = 1

    def __post_init__(self):
        if self.first_sign not in (1, -1) or self.second_sign not in (1, -1):
            raise ValueError("kernel signs must be +1 or -1")

    @property
    def distinct(self) -> bool:
        return len({self.denom, self.first, self.second}) == 3

    @property
    def variables(self) -> frozenset:
        return frozenset((self.denom, self.first, self.second))

    def coefficient(self, n: int, k: int) -> int:
        sign = -1 if (self.first_sign < 0 and (n - k) % 2) != (self.second_sign < 0 and k % 2) else 1
        return binom(n, k) * sign

    def monomial(self, n: int, k: int) -> MultiIndex:
        return multi_index({self.denom: -n - 1, self.first: n - k, self.second: k})

    def __str__(self) -> str:
        a = ("" if self.first_sign > 0 else "-") + self.first
        b = (" + " if self.second_sign > 0 else " - ") + self.second
        return f"{self.denom}^-1*delta(({a}{b})/{self.denom})"


@dataclass(frozen=True)
class DeltaTerm:
    coeff: Fraction
    kernel: Optional[DeltaKernel]
    factor: LaurentPoly

    def variables(self) -> frozenset:
        vs = set(self.factor.variables())
        if self.kernel is not None:
            vs |= self.kernel.variables
        return frozenset(vs)


class DeltaExpr:
    """Finite sum of (coefficient * optional delta kernel * Laurent polynomial)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[DeltaTerm] = ()):
        self.terms: Tuple[DeltaTerm, ...] = tuple(t for t in terms if t.coeff and t.factor)

    @classmethod
    def kernel(cls, kernel: Optional[DeltaKernel], factor=None, coeff=Fraction(1)) -> "DeltaExpr":
        if factor is None:
            factor = ONE
        elif not isinstance(factor, LaurentPoly):
            factor = LaurentPoly.const(factor)
        return cls([DeltaTerm(Fraction(coeff), kernel, factor)])

    def __add__(self, other: "DeltaExpr") -> "DeltaExpr":
        return DeltaExpr(self.terms + other.terms)

    def __neg__(self) -> "DeltaExpr":
        return DeltaExpr(DeltaTerm(-t.coeff, t.kernel, t.factor) for t in self.terms)

    def __sub__(self, other: "DeltaExpr") -> "DeltaExpr":
        return self + (-other)

    def __mul__(self, other) -> "DeltaExpr":
        if isinstance(other, LaurentPoly):
            return DeltaExpr(DeltaTerm(t.coeff, t.kernel, t.factor * other) for t in self.terms)
        return DeltaExpr(DeltaTerm(t.coeff * other, t.kernel, t.factor) for t in self.terms)

    __rmul__ = __mul__

    def variables(self) -> frozenset:
        out = set()
        for t in self.terms:
            out |= t.variables()
        return frozenset(out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            k = str(t.kernel) if t.kernel else "1"
            parts.append(f"{t.coeff}*{k}*({t.factor})")
        return " + ".join(parts)

    __repr__ = __str__


def _solve_kernel(kernel: DeltaKernel, rest: MultiIndex) -> Optional[Tuple[int, int]]:
    """(n, k) of the unique kernel monomial equal to ``rest``, if any."""
    if not kernel.distinct:
        raise NonSummable(f"kernel {kernel} repeats a variable; its coefficients are infinite sums")
    ea = eb = ec = 0
    for v, e in rest:
        if v == kernel.denom:
            ea = e
        elif v == kernel.first:
            eb = e
        elif v == kernel.second:
            ec = e
        else:
            return None
    n = -ea - 1
    k = ec
    if k < 0 or n - k != eb:
        return None
    return n, k


def delta_expr_coeff(e: DeltaExpr, idx: MultiIndex) -> Tuple[Any, int]:
    """Exact coefficient of the monomial ``idx`` in ``e``.

    Returns ``(value, contributions)``; the second item certifies how many
    kernel-expansion terms entered the (necessarily finite) sum.
    """
    total = 0
    count = 0
    for term in e.terms:
        for m, c in term.factor.items():
            rest = mi_div(idx, m)
            if term.kernel is None:
                if not rest:
                    total = total + term.coeff * c
                    count += 1
                continue
            nk = _solve_kernel(term.kernel, rest)
            if nk is None:
                continue
            w = term.kernel.coefficient(*nk)
            if w:
                total = total + (term.coeff * w) * c
                count += 1
    return total, count


def delta_expr_window(e: DeltaExpr, window: Optional[DegreeWindow] = None) -> Dict[MultiIndex, Any]:
    """All nonzero coefficients of ``e`` whose monomials lie inside ``window``."""
    window = window or DEFAULT_WINDOW
    out: Dict[MultiIndex, Any] = {}

    def put(idx, value):
        s = out.get(idx)
        s = value if s is None else s + value
        if s:
            out[idx] = s
        else:
            out.pop(idx, None)

    for term in e.terms:
        kern = term.kernel
        if kern is None:
            for m, c in term.factor.items():
                if window.contains(m):
                    put(m, term.coeff * c)
            continue
        if not kern.distinct:
            raise NonSummable(f"kernel {kern} repeats a variable; its coefficients are infinite sums")
        lo_a, hi_a = window.range(kern.denom)
        lo_b, hi_b = window.range(kern.first)
        lo_c, hi_c = window.range(kern.second)
        for m, c in term.factor.items():
            others = tuple((v, x) for v, x in m if v not in kern.variables)
            if not window.contains(others):
                continue
            ma, mb, mc = mi_get(m, kern.denom), mi_get(m, kern.first), mi_get(m, kern.second)
            for n in range(ma - hi_a - 1, ma - lo_a):
                k_lo = max(0, lo_c - mc, n + mb - hi_b)
                k_hi = min(hi_c - mc, n + mb - lo_b)
                for k in range(k_lo, k_hi + 1):
                    w = kern.coefficient(n, k)
                    if not w:
                        continue
                    idx = mi_mul(others, multi_index({kern.denom: ma - n - 1,
                                                      kern.first: mb + n - k,
                                                      kern.second: mc + k}))
                    put(idx, (term.coeff * w) * c)
    return out


def _index_order(variables):
    variables = sorted(variables)

    def key(idx):
        exps = tuple(mi_get(idx, v) for v in variables)
        return (sum(abs(x) for x in exps), exps)

    return key


def delta_expr_equal(a: DeltaExpr, b: DeltaExpr, window: Optional[DegreeWindow] = None,
                     axiom: str = "delta_equal") -> Report:
    """Compare two delta expressions on every monomial of ``window``.

    Disagreements are reported nearest-to-origin first (by total absolute
    degree, then lexicographically), at most 16 of them.
    """
    window = window or DEFAULT_WINDOW
    report = Report().check(axiom)
    ca = delta_expr_window(a, window)
    cb = delta_expr_window(b, window)
    bad = [idx for idx in set(ca) | set(cb) if ca.get(idx, 0) != cb.get(idx, 0)]
    bad.sort(key=_index_order(a.variables() | b.variables()))
    for idx in bad:
        if not report.add(Violation(axiom, index=idx, expected=ca.get(idx, 0), actual=cb.get(idx, 0))):
            report.suppressed[axiom] += len(bad) - 1 - bad.index(idx)
            break
    return report


def residue(p, v: str) -> LaurentPoly:
    """Coefficient of v^-1, as a Laurent polynomial in the remaining variables."""
    if isinstance(p, LaurentPoly):
        out = {}
        for idx, c in p.items():
            if mi_get(idx, v) == -1:
                out[mi_set(idx, v, 0)] = c
        return LaurentPoly(out)
    if not isinstance(p, DeltaExpr):
        raise TypeError("residue expects a LaurentPoly or DeltaExpr")
    out = ZERO
    for term in p.terms:
        kern = term.kernel
        if kern is None:
            out = out + residue(term.factor, v) * term.coeff
            continue
        if not kern.distinct:
            raise NonSummable(f"kernel {kern} repeats a variable")
        if v not in kern.variables:
            raise NonSummable(f"residue in {v} leaves the kernel {kern} unexpanded (infinite support)")
        for m, c in term.factor.items():
            target = -1 - mi_get(m, v)
            for n, k in _residue_points(kern, v, target):
                w = kern.coefficient(n, k)
                if w:
                    mono = mi_set(mi_mul(kern.monomial(n, k), m), v, 0)
                    out = out + LaurentPoly({mono: (term.coeff * w) * c})
    return out


def _residue_points(kern: DeltaKernel, v: str, target: int):
    """Kernel indices (n, k) whose ``v`` exponent equals ``target``.

    Raises NonSummable when infinitely many of them carry a nonzero binomial.
    Nonzero binomials binom(n, k) with k >= 0 occur exactly when n < 0 or n >= k.
    """
    if v == kern.denom:
        n = -target - 1
        if n < 0:
            raise NonSummable(f"residue in {v}: (sum)^{n} expands to infinitely many terms")
        return [(n, k) for k in range(0, n + 1)]
    if v == kern.second:
        k = target
        if k < 0:
            return []
        raise NonSummable(f"residue in {v}: infinitely many n contribute at k={k}")
    # v is the first numerator variable: n - k = target
    if target >= 0:
        raise NonSummable(f"residue in {v}: infinitely many (n, k) with n - k = {target}")
    return [(k + target, k) for k in range(0, -target)]


SUBSTITUTE_DENOMINATOR = "replace-x-by-(y+z)"
SUBSTITUTE_NUMERATOR = "replace-y-by-(x-z)"


def delta_substitute(e: DeltaExpr, target: str) -> DeltaExpr:
    """Rewrite the factor multiplying x^-1 delta((y+z)/x).

    ``replace-x-by-(y+z)`` turns f(x, y, z) into f(y+z, y, z); ``replace-y-by-(x-z)``
    turns it into f(x, x-z, z). Both rewrites leave every coefficient unchanged.
    The substituted factor must remain a Laurent polynomial, which holds when
    the replaced variable only occurs to nonnegative powers.
    """
    if target not in (SUBSTITUTE_DENOMINATOR, SUBSTITUTE_NUMERATOR):
        raise ValueError(f"unknown substitution {target!r}")
    kernels = {t.kernel for t in e.terms}
    if len(kernels) != 1 or None in kernels:
        raise HypothesisViolated("expression must carry exactly one delta kernel")
    (kern,) = kernels
    if not kern.distinct or kern.first_sign != 1 or kern.second_sign != 1:
        raise HypothesisViolated(f"kernel {kern} is not of the shape x^-1 delta((y+z)/x)")
    x, y, z = kern.denom, kern.first, kern.second
    if target == SUBSTITUTE_DENOMINATOR:
        old, a, sign = x, y, 1
    else:
        old, a, sign = y, x, -1
    terms = []
    for t in e.terms:
        new = ZERO
        for m, c in t.factor.items():
            n = mi_get(m, old)
            if n < 0:
                raise HypothesisViolated(
                    f"substituting into {old}^{n} does not give a Laurent polynomial")
            rest = mi_set(m, old, 0)
            new = new + expand_power(a, z, sign, n).times_monomial(rest, c)
        terms.append(DeltaTerm(t.coeff, kern, new))
    return DeltaExpr(terms)


# --------------------------------------------------------------------------
# the kernels that appear in the Jacobi identity

JACOBI_MINUS = DeltaKernel("x0", "x1", "x2", 1, -1)       # x0^-1 d((x1 - x2)/x0)
JACOBI_REVERSED = DeltaKernel("x0", "x2", "x1", -1, 1)    # x0^-1 d((-x2 + x1)/x0)
JACOBI_SHIFTED = DeltaKernel("x1", "x2", "x0", 1, 1)      # x1^-1 d((x2 + x0)/x1)
TWO_TERM_PARTNER = DeltaKernel("x2", "x1", "x0", 1, -1)   # x2^-1 d((x1 - x0)/x2)


def two_term_delta() -> DeltaExpr:
    """x1^-1 d((x2+x0)/x1) - x2^-1 d((x1-x0)/x2), identically zero."""
    return DeltaExpr.kernel(JACOBI_SHIFTED) - DeltaExpr.kernel(TWO_TERM_PARTNER)


def three_term_delta() -> DeltaExpr:
    """x0^-1 d((x1-x2)/x0) - x0^-1 d((-x2+x1)/x0) - x1^-1 d((x2+x0)/x1), identically zero."""
    return (DeltaExpr.kernel(JACOBI_MINUS) - DeltaExpr.kernel(JACOBI_REVERSED)
            - DeltaExpr.kernel(JACOBI_SHIFTED))
