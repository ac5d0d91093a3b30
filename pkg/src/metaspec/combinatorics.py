"""Exact lattice-point counting for frequency simplices.

Everything here is exact: Python integers for counts and Fractions for
coefficients. The counts grow like k^d / d!, well past 64 bits.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    DimensionCap,
    InputValidationError,
    InterpolationMismatch,
    NoExactFit,
    NotDiscreteBelow,
)
from .io import parse_rational
from .rational import RationalFrequencies

INFINITE = math.inf
NOT_AN_EIGENVALUE = 0

_TABLE_CACHE: "OrderedDict[tuple[int, ...], list[int]]" = OrderedDict()
_TABLE_CACHE_SIZE = 256
# dense tables above this length switch to enumerating lattice points
DENSE_LIMIT = 5_000_000
SPARSE_BUDGET = 5_000_000


def _coins(p: Sequence[int]) -> tuple[int, ...]:
    coins = tuple(sorted(int(v) for v in p))
    if not coins or coins[0] < 1:
        raise InputValidationError(f"denumerant needs positive integer parts, got {tuple(p)}")
    return coins


def _build_table(coins: tuple[int, ...], K: int) -> list[int]:
    table = [0] * (K + 1)
    table[0] = 1
    for c in coins:
        for k in range(c, K + 1):
            table[k] += table[k - c]
    return table


def denumerant_table(p: Sequence[int], K: int) -> list[int]:
    """``[denumerant(p, k) for k in range(K + 1)]``, computed by the coin DP."""
    coins = _coins(p)
    if K < 0:
        return []
    if K > DENSE_LIMIT:
        raise DimensionCap(f"dense denumerant table of length {K + 1} exceeds {DENSE_LIMIT + 1}")
    table = _TABLE_CACHE.get(coins)
    if table is None or len(table) <= K:
        size = K if table is None else max(K, 2 * len(table))
        table = _build_table(coins, size)
        _TABLE_CACHE[coins] = table
        if len(_TABLE_CACHE) > _TABLE_CACHE_SIZE:
            _TABLE_CACHE.popitem(last=False)
    _TABLE_CACHE.move_to_end(coins)
    return table[: K + 1]


def _sparse_solutions(coins: tuple[int, ...], k: int, exact: bool) -> dict[int, int]:
    """{t: #solutions of sum n_j c_j = t} over t <= k, walking the lattice points.

    With ``exact`` only t = k is kept and the smallest coin is solved for
    directly. Work is bounded by SPARSE_BUDGET visited points.
    """
    order = tuple(sorted(coins, reverse=True))
    head, last = (order[:-1], order[-1]) if exact else (order, None)
    found: dict[int, int] = {}
    visited = 0

    def walk(i: int, total: int) -> None:
        nonlocal visited
        visited += 1
        if visited > SPARSE_BUDGET:
            raise DimensionCap(f"more than {SPARSE_BUDGET} lattice points below {k} for parts {coins}")
        if i == len(head):
            if not exact:
                found[total] = found.get(total, 0) + 1
            elif (k - total) % last == 0:
                found[k] = found.get(k, 0) + 1
            return
        c = head[i]
        while total <= k:
            walk(i + 1, total)
            total += c

    walk(0, 0)
    return found


def level_counts(p: Sequence[int], K: int) -> list[tuple[int, int]]:
    """Sorted (k, denumerant(p, k)) for 0 <= k <= K with nonzero count.

    Uses the dense DP table when K is moderate, otherwise enumerates the
    (few) lattice points directly, as happens for huge coprime parts.
    """
    coins = _coins(p)
    if K < 0:
        return []
    if K <= DENSE_LIMIT:
        return [(k, m) for k, m in enumerate(denumerant_table(coins, K)) if m]
    return sorted(_sparse_solutions(coins, K, exact=False).items())


def denumerant(p: Sequence[int], k: int) -> int:
    """Number of n in N_0^d with sum n_j p_j = k."""
    if k < 0:
        return 0
    if k <= DENSE_LIMIT:
        return denumerant_table(p, k)[k]
    return _sparse_solutions(_coins(p), k, exact=True).get(k, 0)


def cumulative_count(p: Sequence[int], K: int) -> int:
    """Number of n in N_0^d with sum n_j p_j <= K."""
    if K < 0:
        return 0
    # an extra part of size 1 absorbs the slack K - sum n_j p_j
    return denumerant(tuple(p) + (1,), K)


def _ground_shift(rf: RationalFrequencies, E_0) -> Fraction:
    return rf.ground_shift if E_0 is None else parse_rational(E_0)


def multiplicity(rf: RationalFrequencies, lam, E_0=None):
    """Multiplicity of ``lam`` as an eigenvalue: an int, INFINITE, or 0 if absent.

    ``lam = E_0 - x * sum n_j p_j``, so the multiplicity counts n in N_0^d
    with ``sum n_j p_j = T := (E_0 - lam)/x``. With parts of both signs the
    attainable T form the subgroup g*Z (g = gcd|p|), each with infinitely many
    representations.
    """
    lam = parse_rational(lam)
    T = (_ground_shift(rf, E_0) - lam) / rf.x
    if T.denominator != 1:
        return NOT_AN_EIGENVALUE
    T = T.numerator
    nonzero = [v for v in rf.p if v]
    if not nonzero:
        return INFINITE if T == 0 else NOT_AN_EIGENVALUE
    if rf.mixed_signs:
        return INFINITE if T % rf.g == 0 else NOT_AN_EIGENVALUE
    sign = 1 if nonzero[0] > 0 else -1
    count = denumerant([abs(v) for v in nonzero], sign * T)
    if len(nonzero) < rf.d:
        return INFINITE if count else NOT_AN_EIGENVALUE
    return count


def interpolate(xs: Sequence, ys: Sequence) -> list[Fraction]:
    """Monomial coefficients c_0..c_{n-1} of the polynomial through (xs, ys), exactly."""
    xs = [Fraction(v) for v in xs]
    coef = [Fraction(v) for v in ys]
    n = len(xs)
    if len(set(xs)) != n:
        raise InputValidationError("interpolation nodes must be distinct")
    # Newton divided differences
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (X - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [shifted[m] - xs[i] * poly[m] for m in range(n)]
        poly[0] += coef[i]
    return poly


def evaluate(coefficients: Sequence[Fraction], k) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coefficients):
        acc = acc * k + c
    return acc


@dataclass(frozen=True)
class QuasiPolynomial:
    """Per-residue polynomials: value(k) = sum_j classes[k % period][j] * k**j."""

    degree: int
    period: int
    classes: tuple[tuple[Fraction, ...], ...]

    def __call__(self, k: int) -> Fraction:
        return evaluate(self.classes[k % self.period], k)

    @property
    def period_divides_factorial(self) -> bool:
        """Whether the minimal period divides (degree + 1)!."""
        return math.factorial(self.degree + 1) % self.period == 0


def _divisors(n: int) -> list[int]:
    small = [i for i in range(1, math.isqrt(n) + 1) if n % i == 0]
    return sorted(set(small + [n // i for i in small]))


def quasi_polynomial_fit(p: Sequence[int], k_window: int | None = None) -> QuasiPolynomial:
    """Exact quasi-polynomial form of k -> denumerant(p, k) with minimal period.

    Candidate periods are the divisors of lcm(p). Each residue class is
    interpolated on its first d points and checked on the rest of the window.
    """
    coins = _coins(p)
    d = len(coins)
    L = math.lcm(*coins)
    needed = 2 * d * L
    if k_window is None:
        k_window = needed
    if k_window < needed:
        raise InputValidationError(f"k_window must be >= 2*d*lcm(p) = {needed}, got {k_window}")
    table = denumerant_table(coins, k_window)
    for period in _divisors(L):
        classes = []
        for r in range(period):
            ks = list(range(r, k_window + 1, period))
            coeffs = interpolate(ks[:d], [table[k] for k in ks[:d]])
            if any(evaluate(coeffs, k) != table[k] for k in ks[d:]):
                break
            classes.append(tuple(coeffs))
        else:
            return QuasiPolynomial(degree=d - 1, period=period, classes=tuple(classes))
    raise NoExactFit(f"no exact quasi-polynomial fit for p={coins} on k <= {k_window}")


def _negative_parts(p: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(int(v) for v in p)
    if not parts or any(v >= 0 for v in parts):
        raise InputValidationError(f"simplex parts must all be negative, got {parts}")
    return parts


def lattice_count_simplex(p: Sequence[int], q: int, k: int) -> int:
    """#(kP ∩ Z^d) for P = {x >= 0 : -sum x_j p_j <= q}."""
    parts = _negative_parts(p)
    if q < 1:
        raise InputValidationError(f"q must be >= 1, got {q}")
    if k < 0:
        raise InputValidationError(f"k must be >= 0, got {k}")
    return cumulative_count([-v for v in parts], k * q)


@dataclass(frozen=True)
class EhrhartPolynomial:
    """i(P, k) = sum_j coefficients[j] k^j for P = {x >= 0 : -sum x_j p_j <= q}.

    ``facet_lattice_volumes`` lists the coordinate facets {x_j = 0} in order,
    then the slanted facet, each measured in units of its own lattice.
    ``facet_euclidean_volumes`` is the same list in Euclidean measure.
    """

    coefficients: tuple[Fraction, ...]
    p: tuple[int, ...]
    q: int
    facet_lattice_volumes: tuple[Fraction, ...]
    facet_euclidean_volumes: tuple[float, ...]

    @property
    def d(self) -> int:
        return len(self.p)

    def __call__(self, k) -> Fraction:
        return evaluate(self.coefficients, k)

    @property
    def volume(self) -> Fraction:
        d = self.d
        return Fraction(self.q**d, math.factorial(d) * math.prod(abs(v) for v in self.p))

    @property
    def lattice_half_boundary(self) -> Fraction:
        return sum(self.facet_lattice_volumes, Fraction(0)) / 2

    @property
    def euclidean_half_boundary(self) -> float:
        return 0.5 * math.fsum(self.facet_euclidean_volumes)


@lru_cache(maxsize=512)
def _ehrhart(parts: tuple[int, ...], q: int) -> EhrhartPolynomial:
    d = len(parts)
    mags = [-v for v in parts]
    values = [lattice_count_simplex(parts, q, k) for k in range(3 * d + 1)]
    coeffs = interpolate(range(d + 1), values[: d + 1])
    for k in range(d + 1, 3 * d + 1):
        if evaluate(coeffs, k) != values[k]:
            raise InterpolationMismatch(f"Ehrhart interpolation fails at k={k} for p={parts}, q={q}")
    prod = math.prod(mags)
    base = math.factorial(d - 1)
    coordinate = [Fraction(q ** (d - 1) * m, base * prod) for m in mags]
    gcd = math.gcd(*mags)
    slant_lattice = Fraction(q ** (d - 1) * gcd, base * prod)
    norm = math.sqrt(sum(m * m for m in mags))
    slant_euclid = float(Fraction(q ** (d - 1), base * prod)) * norm
    return EhrhartPolynomial(
        coefficients=tuple(coeffs),
        p=parts,
        q=q,
        facet_lattice_volumes=tuple(coordinate) + (slant_lattice,),
        facet_euclidean_volumes=tuple(float(v) for v in coordinate) + (slant_euclid,),
    )


def ehrhart_polynomial(p: Sequence[int], q: int | None = None) -> EhrhartPolynomial:
    """Ehrhart polynomial of the frequency simplex, by exact interpolation on k = 0..d.

    ``q`` defaults to lcm|p|; it must be a multiple of every |p_j| so that P
    has integer vertices.
    """
    parts = _negative_parts(p)
    if q is None:
        q = math.lcm(*(-v for v in parts))
    q = int(q)
    if q < 1 or any(q % v for v in parts):
        raise InputValidationError(f"q={q} must be a positive multiple of every |p_j| for p={parts}")
    return _ehrhart(parts, q)


def _require_discrete_below(rf: RationalFrequencies) -> None:
    if not rf.all_negative:
        raise NotDiscreteBelow(f"counting needs all frequencies negative, got p={rf.p}")


def counting_function(rf: RationalFrequencies, r, E_0=None) -> int:
    """N(r): number of eigenvalues <= r counted with multiplicity."""
    _require_discrete_below(rf)
    r = parse_rational(r)
    shift = _ground_shift(rf, E_0)
    if r < shift:
        return 0
    K = math.floor((r - shift) / rf.x)
    return cumulative_count([-v for v in rf.p], K)


@dataclass(frozen=True)
class SandwichResult:
    lower: int
    upper: int
    actual: int
    aligned: bool
    k: int

    @property
    def holds(self) -> bool:
        return self.lower <= self.actual <= self.upper and (not self.aligned or self.lower == self.actual)


def verify_sandwich(rf: RationalFrequencies, r, E_0=None, q: int | None = None) -> SandwichResult:
    """Ehrhart bounds p(k) <= N(r) <= p(k + 1) with k = floor((r - E_0)/(q x)).

    ``q`` defaults to lcm|p| and may be any multiple of it.
    """
    _require_discrete_below(rf)
    r = parse_rational(r)
    shift = _ground_shift(rf, E_0)
    if r < shift:
        raise InputValidationError(f"r={r} lies below the ground level {shift}")
    q = rf.q_lcm if q is None else int(q)
    poly = ehrhart_polynomial(rf.p, q)
    t = (r - shift) / (q * rf.x)
    k = math.floor(t)
    lower, upper = poly(k), poly(k + 1)
    return SandwichResult(
        lower=int(lower),
        upper=int(upper),
        actual=counting_function(rf, r, shift),
        aligned=t.denominator == 1,
        k=k,
    )
