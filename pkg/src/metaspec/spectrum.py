"""Point spectra of H_A and of the metaplectic operators mu(g), g in U(d).

The spectrum of H_A is the monoid {-sum n_j s_j} shifted by E_0 = -(1/2) sum s_j.
It is uniformly discrete exactly when the frequencies are commensurable,
which only exact input can decide; classifications built from floats carry
``heuristic=True``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .combinatorics import INFINITE, level_counts
from .errors import (
    AngleInconsistent,
    InconsistentExactData,
    InputValidationError,
    NotDiscrete,
    NotUnitary,
    ReconstructionFailed,
)
from .io import parse_rational
from .linalg import as_square, normal_eigendecomposition, validate_unitary
from .rational import RationalFrequencies, approximate, rationalize
from .symbols import LieAlgebraElement

__all__ = [
    "INFINITE",
    "RationalFrequencies",
    "rationalize",
    "SpectrumClassification",
    "classify",
    "PointSpectrum",
    "enumerate_point_spectrum",
    "MuSpectrum",
    "mu_point_spectrum",
    "unit",
]

UNIFORMLY_DISCRETE = "UniformlyDiscrete"
DENSE = "Dense"
FULL_CIRCLE = "FullCircle"
FINITE_GROUP = "FiniteGroup"


@dataclass(frozen=True)
class SpectrumClassification:
    kind: str
    rational: RationalFrequencies | None = None
    generator: Fraction | None = None
    heuristic: bool = False

    @property
    def discrete(self) -> bool:
        return self.kind == UNIFORMLY_DISCRETE


def _frequencies_of(A) -> list:
    if isinstance(A, LieAlgebraElement):
        return [float(v) for v in A.frequencies]
    return list(A)


def _check_exact(rf: RationalFrequencies, s: Sequence) -> None:
    want = sorted(float(v) for v in s)
    have = sorted(float(v) for v in rf.frequencies)
    if len(want) != len(have):
        raise InconsistentExactData(f"expected {len(want)} frequencies, exact data has {len(have)}")
    scale = 1.0 + max(abs(v) for v in want)
    worst = max(abs(a - b) for a, b in zip(want, have))
    if worst > 1e-8 * scale:
        raise InconsistentExactData(f"exact frequencies differ from the matrix's by {worst:.3e}")


def classify(A, rf: RationalFrequencies | None = None, max_denominator: int = 1000, tol: float = 1e-9) -> SpectrumClassification:
    """Decide whether the point spectrum is uniformly discrete or dense.

    ``A`` is a LieAlgebraElement or a sequence of frequencies. With ``rf``
    given (exact mode) the answer is always UniformlyDiscrete after checking
    that ``rf`` reproduces the frequencies of ``A``.
    """
    s = _frequencies_of(A)
    if rf is not None:
        _check_exact(rf, s)
        return SpectrumClassification(UNIFORMLY_DISCRETE, rf, rf.generator, heuristic=False)
    try:
        found = rationalize(s, max_denominator=max_denominator, tol=tol)
    except ReconstructionFailed:
        return SpectrumClassification(DENSE, heuristic=True)
    return SpectrumClassification(UNIFORMLY_DISCRETE, found, found.generator, heuristic=not found.exact)


@dataclass(frozen=True)
class PointSpectrum:
    """Eigenvalues with multiplicities (ints or INFINITE).

    ``complete`` is True only when every eigenvalue up to the cutoff is listed.
    """

    entries: tuple[tuple[Fraction, float], ...]
    complete: bool
    generator: Fraction

    @property
    def values(self) -> list[Fraction]:
        return [v for v, _ in self.entries]

    def expanded(self) -> list[Fraction]:
        """Eigenvalues repeated by multiplicity (finite multiplicities only)."""
        out = []
        for v, m in self.entries:
            if m == INFINITE:
                raise ValueError("cannot expand an infinite multiplicity")
            out.extend([v] * int(m))
        return out


def _reachable(parts: Sequence[int], n_max: int) -> set[int]:
    sums = {0}
    for p in parts:
        sums = {a + n * p for a in sums for n in range(n_max + 1)}
    return sums


def enumerate_point_spectrum(A, rf: RationalFrequencies | None = None, cutoff=0, n_max: int = 50) -> PointSpectrum:
    """Eigenvalues lambda = E_0 - x * sum n_j p_j that are <= cutoff.

    All frequencies negative: complete list with exact multiplicities.
    All positive: the spectrum is unbounded below, so only levels with
    ``max n_j <= n_max`` are listed (finite multiplicities, incomplete).
    Mixed signs or a zero frequency: every eigenvalue has infinite
    multiplicity; the values reachable with ``max n_j <= n_max`` are listed.
    """
    if rf is None:
        if A is None:
            raise InputValidationError("need A or rational frequencies")
        found = classify(A)
        if not found.discrete:
            raise NotDiscrete("frequencies are not commensurable; the point spectrum is dense")
        rf = found.rational
    elif A is not None:
        classify(A, rf)
    cutoff = parse_rational(cutoff)
    if n_max < 1:
        raise InputValidationError("n_max must be positive")
    shift = rf.ground_shift
    x = rf.x

    if rf.all_negative:
        K = math.floor((cutoff - shift) / x)
        entries = tuple((shift + k * x, m) for k, m in level_counts([-v for v in rf.p], K))
        return PointSpectrum(entries, True, rf.generator)

    if rf.all_positive:
        lowest = min(rf.p) * n_max
        entries = [(shift - k * x, m) for k, m in level_counts(rf.p, lowest) if shift - k * x <= cutoff]
        return PointSpectrum(tuple(sorted(entries)), False, rf.generator)

    values = sorted(shift - t * x for t in _reachable(rf.p, n_max))
    entries = tuple((v, INFINITE) for v in values if v <= cutoff)
    return PointSpectrum(entries, False, rf.generator)


def unit(turns: Fraction) -> complex:
    """exp(2*pi*i*turns), exact at multiples of a quarter turn."""
    t = Fraction(turns) % 1
    if t.denominator <= 4 and (4 * t).denominator == 1:
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(4 * t)]
    return cmath.exp(2j * math.pi * float(t))


@dataclass(frozen=True)
class MuSpectrum:
    """sigma_p(mu(g)); for rational rotations a rotated cyclic group.

    ``residues`` are the group elements n*p/q mod 1 in turns and
    ``phase_turns`` the principal branch of det(g)^(-1/2) in turns, so the
    spectrum is {exp(2 pi i (phase_turns + r))}. The other branch adds 1/2.
    """

    kind: str
    q: int | None
    p: int | None
    phase_branches: tuple[complex, complex]
    phase_turns: Fraction | None = None
    residues: tuple[Fraction, ...] = ()
    elements: tuple[complex, ...] | None = None
    angles: tuple[Fraction, ...] | None = None

    def element_turns(self, branch: str = "principal") -> list[Fraction]:
        if self.phase_turns is None:
            raise ValueError("no finite element list for a full-circle spectrum")
        shift = self.phase_turns + (Fraction(1, 2) if branch == "other" else 0)
        return sorted((shift + r) % 1 for r in self.residues)

    def contains(self, z: complex, tol: float = 1e-9) -> bool:
        if abs(abs(z) - 1.0) > tol:
            return False
        if self.kind == FULL_CIRCLE:
            return True
        return any(abs(z - e) <= tol for e in self.elements)


def _principal_phase(angle_sum: Fraction) -> Fraction:
    """Turns of the principal square root of exp(-2 pi i angle_sum)."""
    arg = (-angle_sum) % 1
    if arg > Fraction(1, 2):
        arg -= 1
    return arg / 2


def _match_angles(angles: Sequence[Fraction], numeric: np.ndarray, tol: float) -> None:
    remaining = list(numeric)
    for a in angles:
        target = unit(a)
        dist = [abs(target - z) for z in remaining]
        j = int(np.argmin(dist))
        if dist[j] > tol:
            raise AngleInconsistent(f"angle {a} (exp(2 pi i a) = {target:.6g}) is not an eigenvalue of g")
        remaining.pop(j)


def mu_point_spectrum(
    g,
    angles: Sequence | None = None,
    max_denominator: int = 1000,
    tol: float = 1e-9,
    unitary_tol: float = 1e-10,
) -> MuSpectrum:
    """Point spectrum of mu(g).

    ``angles`` (exact mode) are rationals a_j with eigenvalues
    exp(2 pi i a_j); otherwise they are recovered from the numeric
    eigenvalues of g, and a failed recovery means an irrational rotation,
    whose spectrum is the full circle.
    """
    g = as_square(g, "g")
    if not validate_unitary(g, unitary_tol):
        raise NotUnitary("g is not unitary")
    eig = normal_eigendecomposition(g)
    thetas = eig.values

    if angles is not None:
        turns = [parse_rational(a) for a in angles]
        if len(turns) != g.shape[0]:
            raise AngleInconsistent(f"expected {g.shape[0]} angles, got {len(turns)}")
        _match_angles(turns, thetas, tol)
    else:
        turns = []
        for z in thetas:
            a = approximate(cmath.phase(z) / (2 * math.pi), max_denominator, tol)
            if a is None:
                root = cmath.sqrt(1 / complex(np.prod(thetas)))
                return MuSpectrum(FULL_CIRCLE, None, None, (root, -root))
            turns.append(a)

    q = math.lcm(*(a.denominator for a in turns))
    p = 0
    for a in turns:
        p = math.gcd(p, q * abs(a.numerator) // a.denominator)
    if p == 0:
        p = q
    order = q // math.gcd(p, q)
    residues = tuple(Fraction(n * p % q, q) for n in range(order))
    phase = _principal_phase(sum(turns, Fraction(0)))
    root = unit(phase)
    elements = tuple(unit(phase + r) for r in residues)
    return MuSpectrum(
        FINITE_GROUP,
        q,
        p,
        (root, -root),
        phase_turns=phase,
        residues=residues,
        elements=elements,
        angles=tuple(turns),
    )
