"""Commensurable frequencies s_j = p_j * x with integer p and rational x > 0."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterator, Sequence

from .errors import InputValidationError, ReconstructionFailed
from .io import parse_rational


def convergents(value: Fraction) -> Iterator[Fraction]:
    """Continued-fraction convergents of an exact rational, in order."""
    num, den = value.numerator, value.denominator
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while den:
        a, rem = divmod(num, den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield Fraction(h, k)
        num, den = den, rem


def approximate(value: float, max_denominator: int, tol: float) -> Fraction | None:
    """Smallest-denominator convergent within ``tol`` of ``value``, or None."""
    exact = Fraction(value)
    for c in convergents(exact):
        if c.denominator > max_denominator:
            return None
        if abs(c - exact) <= tol:
            return c
    return None


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


def _gcd(values) -> int:
    out = 0
    for v in values:
        out = math.gcd(out, v)
    return out


@dataclass(frozen=True)
class RationalFrequencies:
    """Frequencies ``s_j = p_j * x``.

    ``exact`` is False when the representation came from rounding floats.
    """

    x: Fraction
    p: tuple[int, ...]
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "p", tuple(int(v) for v in self.p))
        if self.x <= 0:
            raise InputValidationError(f"scale x must be positive, got {self.x}")
        if not self.p:
            raise InputValidationError("need at least one frequency")

    @property
    def d(self) -> int:
        return len(self.p)

    @property
    def g(self) -> int:
        """gcd of the nonzero |p_j| (0 if every p_j vanishes)."""
        return _gcd(abs(v) for v in self.p)

    @property
    def q_lcm(self) -> int:
        """lcm of the nonzero |p_j| (1 if every p_j vanishes)."""
        return _lcm(abs(v) for v in self.p if v)

    @property
    def frequencies(self) -> tuple[Fraction, ...]:
        return tuple(v * self.x for v in self.p)

    @property
    def ground_shift(self) -> Fraction:
        """E_0 = -(1/2) sum s_j."""
        return -sum(self.frequencies, Fraction(0)) / 2

    @property
    def generator(self) -> Fraction:
        """Positive generator of the group generated by the frequencies."""
        return self.g * self.x

    @property
    def all_negative(self) -> bool:
        return all(v < 0 for v in self.p)

    @property
    def all_positive(self) -> bool:
        return all(v > 0 for v in self.p)

    @property
    def mixed_signs(self) -> bool:
        return any(v < 0 for v in self.p) and any(v > 0 for v in self.p)

    @classmethod
    def from_frequencies(cls, s: Sequence) -> "RationalFrequencies":
        """Exact construction from rational frequencies (strings, ints, Fractions)."""
        return rationalize([parse_rational(v) for v in s])


def _from_exact(values: Sequence[Fraction], exact: bool) -> RationalFrequencies:
    common = _lcm(v.denominator for v in values)
    numerators = [int(v * common) for v in values]
    g = _gcd(abs(m) for m in numerators)
    if g == 0:
        return RationalFrequencies(Fraction(1), tuple(0 for _ in values), exact)
    return RationalFrequencies(Fraction(g, common), tuple(m // g for m in numerators), exact)


def rationalize(
    s: Sequence, max_denominator: int = 1000, tol: float = 1e-9, allow_irrational_scale: bool = False
) -> RationalFrequencies:
    """Write frequencies as integer multiples of a common positive scale.

    Exact rationals are used as given. Floats are rounded one by one to
    continued-fraction convergents with denominator <= ``max_denominator``
    within ``tol``. With ``allow_irrational_scale`` a failure falls back to
    rounding the ratios to the largest |s_j| the same way, so that
    s = sqrt(2) * (-1, -2) is recognized. Raises ReconstructionFailed
    when no reconstruction works.
    """
    values = list(s)
    if not values:
        raise InputValidationError("need at least one frequency")
    if all(isinstance(v, Rational) for v in values):
        return _from_exact([Fraction(v) for v in values], exact=True)

    floats = [float(v) for v in values]
    if not all(math.isfinite(v) for v in floats):
        raise InputValidationError("frequencies must be finite")

    approx = [approximate(v, max_denominator, tol) for v in floats]
    if all(a is not None for a in approx):
        return _from_exact(approx, exact=False)

    ref = max(abs(v) for v in floats)
    ratios = None
    if allow_irrational_scale and ref > 0:
        ratios = [approximate(v / ref, max_denominator, tol) for v in floats]
    if ratios is not None and all(r is not None for r in ratios):
        base = _from_exact(ratios, exact=False)
        rf = RationalFrequencies(base.x * Fraction(ref), base.p, exact=False)
        worst = max(abs(float(f) - v) for f, v in zip(rf.frequencies, floats))
        if worst <= tol * max(1.0, ref):
            return rf

    worst = 0.0
    for v in floats:
        best = Fraction(v).limit_denominator(max_denominator)
        worst = max(worst, abs(float(best) - v))
    raise ReconstructionFailed(
        f"no common rational scale with denominators <= {max_denominator} within {tol:g}",
        worst_residual=worst,
    )
