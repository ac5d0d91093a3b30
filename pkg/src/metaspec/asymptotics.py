"""Two-term Weyl asymptotics of N^hbar(r) for H_A with negative frequencies.

Volumes and surface terms are floating point; the counts they are compared
against come exact from :mod:`metaspec.combinatorics`. Everything is
homogeneous in r/hbar, so only X = r/hbar matters.
"""

from __future__ import annotations

import csv
import io as _io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinatorics import counting_function, cumulative_count, ehrhart_polynomial
from .errors import InputValidationError, NotDiscreteBelow, ZeroFrequency
from .io import format_float, parse_rational
from .rational import RationalFrequencies
from .spectrum import classify
from .symbols import LieAlgebraElement, symbol_eval


def _magnitudes(s: Sequence) -> list[float]:
    mags = [abs(float(v)) for v in s]
    if not mags:
        raise InputValidationError("need at least one frequency")
    if any(m == 0.0 for m in mags):
        raise ZeroFrequency("volumes are infinite when a frequency vanishes")
    return mags


def polytope_volume(s: Sequence, t: float) -> float:
    """Volume of {x >= 0 : sum |s_j| x_j <= t} = t^d / (d! prod|s_j|)."""
    mags = _magnitudes(s)
    d = len(mags)
    return t**d / (math.factorial(d) * math.prod(mags))


def ellipsoid_volume(s: Sequence, t: float) -> float:
    """Volume of {(x, xi) : sum |s_j| (x_j^2 + xi_j^2)/2 <= t}."""
    return (2 * math.pi) ** len(s) * polytope_volume(s, t)


def face_volume(s: Sequence, t: float) -> float:
    """Euclidean (d-1)-volume of the slanted face {x >= 0 : sum |s_j| x_j = t}."""
    mags = _magnitudes(s)
    d = len(mags)
    norm = math.sqrt(sum(m * m for m in mags))
    return norm * t ** (d - 1) / (math.factorial(d - 1) * math.prod(mags))


def surface_integral(s: Sequence, t: float) -> float:
    """Integral of 1/|grad g| over the ellipsoid surface g = t."""
    mags = _magnitudes(s)
    norm = math.sqrt(sum(m * m for m in mags))
    return (2 * math.pi) ** len(mags) * face_volume(s, t) / norm


@dataclass(frozen=True)
class WeylEstimate:
    hbar: float
    r: float
    leading: float
    second_paper: float
    second_lattice: float
    total_paper: float
    total_lattice: float
    exact: int
    remainder_paper: float
    remainder_lattice: float


def _require_negative(rf: RationalFrequencies) -> None:
    if not rf.all_negative:
        raise NotDiscreteBelow(f"Weyl law needs all frequencies negative, got p={rf.p}")


def second_term_coefficients(rf: RationalFrequencies) -> tuple[float, float]:
    """Coefficients of X^(d-1), X = r/hbar, in the Euclidean and lattice readings.

    Expanding c_d u^d + c_{d-1} u^{d-1} with u = (X - E_0)/(q x) gives
    ``c_{d-1} (q x)^(1-d) - d c_d (q x)^(-d) E_0``; the two readings differ
    only in how the slanted facet enters c_{d-1}.
    """
    poly = ehrhart_polynomial(rf.p, rf.q_lcm)
    d = rf.d
    qx = rf.q_lcm * rf.x
    shift = rf.ground_shift
    c_d = poly.coefficients[d]
    correction = d * c_d * shift / qx**d
    lattice = poly.lattice_half_boundary / qx ** (d - 1) - correction
    euclidean = poly.euclidean_half_boundary / float(qx) ** (d - 1) - float(correction)
    return euclidean, float(lattice)


def weyl_estimate(A: LieAlgebraElement | None, rf: RationalFrequencies, hbar, r) -> WeylEstimate:
    """Leading volume term plus both second-term variants, against the exact count.

    ``A`` is only used to check that ``rf`` matches its frequencies.
    """
    _require_negative(rf)
    if A is not None:
        classify(A, rf)
    hbar_q = parse_rational(hbar)
    r_q = parse_rational(r)
    if hbar_q <= 0:
        raise InputValidationError("hbar must be positive")
    X_q = r_q / hbar_q
    if X_q < rf.ground_shift:
        raise InputValidationError(f"r/hbar = {float(X_q)} is below the ground level {float(rf.ground_shift)}")
    X = float(X_q)
    s = [float(v) for v in rf.frequencies]
    d = rf.d
    leading = polytope_volume(s, X)
    paper_coef, lattice_coef = second_term_coefficients(rf)
    second_paper = paper_coef * X ** (d - 1)
    second_lattice = lattice_coef * X ** (d - 1)
    exact = counting_function(rf, X_q)
    total_paper = leading + second_paper
    total_lattice = leading + second_lattice
    return WeylEstimate(
        hbar=float(hbar_q),
        r=float(r_q),
        leading=leading,
        second_paper=second_paper,
        second_lattice=second_lattice,
        total_paper=total_paper,
        total_lattice=total_lattice,
        exact=exact,
        remainder_paper=exact - total_paper,
        remainder_lattice=exact - total_lattice,
    )


@dataclass(frozen=True)
class RemainderScan:
    """Weyl estimates on the aligned grid r_k = hbar (k q x + E_0), k = 1..k_max.

    ``normalized_*`` divides remainders by (r/hbar)^(d-2).
    """

    hbar: float
    ks: tuple[int, ...]
    grid: tuple[float, ...]
    estimates: tuple[WeylEstimate, ...] = field(repr=False)
    remainders_paper: tuple[float, ...]
    remainders_lattice: tuple[float, ...]
    normalized_paper: tuple[float, ...]
    normalized_lattice: tuple[float, ...]
    sup_normalized: float
    sup_normalized_paper: float

    def to_csv(self) -> str:
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["k", "r", "exact", "leading", "second_paper", "second_lattice", "remainder_paper", "remainder_lattice"]
        )
        for k, est in zip(self.ks, self.estimates):
            writer.writerow(
                [
                    k,
                    format_float(est.r),
                    est.exact,
                    format_float(est.leading),
                    format_float(est.second_paper),
                    format_float(est.second_lattice),
                    format_float(est.remainder_paper),
                    format_float(est.remainder_lattice),
                ]
            )
        return buf.getvalue()


def aligned_points(rf: RationalFrequencies, k_max: int, start: int = 1) -> list[Fraction]:
    """Values X = r/hbar at which the Ehrhart sandwich is an equality."""
    step = rf.q_lcm * rf.x
    return [k * step + rf.ground_shift for k in range(start, k_max + 1)]


def remainder_scan(A: LieAlgebraElement | None, rf: RationalFrequencies, hbar, k_max: int) -> RemainderScan:
    _require_negative(rf)
    if k_max < 1:
        raise InputValidationError("k_max must be >= 1")
    if A is not None:
        classify(A, rf)
    hbar_q = parse_rational(hbar)
    d = rf.d
    points = aligned_points(rf, k_max)
    estimates = [weyl_estimate(None, rf, hbar_q, hbar_q * X) for X in points]
    xs = [float(X) for X in points]
    rem_p = tuple(e.remainder_paper for e in estimates)
    rem_l = tuple(e.remainder_lattice for e in estimates)
    norm_p = tuple(v / X ** (d - 2) for v, X in zip(rem_p, xs))
    norm_l = tuple(v / X ** (d - 2) for v, X in zip(rem_l, xs))
    return RemainderScan(
        hbar=float(hbar_q),
        ks=tuple(range(1, k_max + 1)),
        grid=tuple(e.r for e in estimates),
        estimates=tuple(estimates),
        remainders_paper=rem_p,
        remainders_lattice=rem_l,
        normalized_paper=norm_p,
        normalized_lattice=norm_l,
        sup_normalized=max(abs(v) for v in norm_l),
        sup_normalized_paper=max(abs(v) for v in norm_p),
    )


def counting_function_hbar(rf: RationalFrequencies, hbar, r) -> int:
    """Count of hbar * (E_0 + x K) <= r, enumerating the scaled spectrum directly."""
    _require_negative(rf)
    hbar = parse_rational(hbar)
    r = parse_rational(r)
    lowest = hbar * rf.ground_shift
    if r < lowest:
        return 0
    K = math.floor((r - lowest) / (hbar * rf.x))
    return cumulative_count([-v for v in rf.p], K)


def hbar_rescale_check(rf: RationalFrequencies, E_0, hbar, r) -> bool:
    """N^hbar(r) == N^1(r / hbar) exactly."""
    hbar = parse_rational(hbar)
    r = parse_rational(r)
    if E_0 is not None and parse_rational(E_0) != rf.ground_shift:
        raise InputValidationError("E_0 does not match the frequencies")
    return counting_function_hbar(rf, hbar, r) == counting_function(rf, r / hbar)


def monte_carlo_sublevel_volume(
    A: LieAlgebraElement, t: float, samples: int = 1_000_000, seed: int = 0, chunk: int = 200_000
) -> tuple[float, float]:
    """Volume of {w : p_A(w) <= t} by uniform sampling in a bounding box.

    Returns (estimate, standard error). Needs p_A positive definite, i.e.
    all frequencies negative.
    """
    s = np.asarray(A.frequencies, dtype=float)
    if np.any(s >= 0):
        raise NotDiscreteBelow("sublevel sets are bounded only when all frequencies are negative")
    d = A.d
    # p_A(w) >= min|s| |w|^2 / 2
    radius = math.sqrt(2 * t / float(np.min(np.abs(s))))
    box = (2 * radius) ** (2 * d)
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        w = rng.uniform(-radius, radius, size=(n, 2 * d))
        hits += int(np.count_nonzero(symbol_eval(A, w[:, :d], w[:, d:]) <= t))
        done += n
    frac = hits / samples
    return frac * box, box * math.sqrt(frac * (1 - frac) / samples)
