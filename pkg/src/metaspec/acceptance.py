"""Bundled acceptance checks, run by ``metaspec selftest``.

Each check compares the library against an independent oracle (brute-force
enumeration, closed forms or finite differences) at a pinned tolerance and
within a wall-clock budget.
"""

from __future__ import annotations

import cmath
import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .asymptotics import (
    counting_function_hbar,
    ellipsoid_volume,
    face_volume,
    monte_carlo_sublevel_volume,
    polytope_volume,
    remainder_scan,
    surface_integral,
    weyl_estimate,
)
from .combinatorics import (
    counting_function,
    denumerant_table,
    ehrhart_polynomial,
    quasi_polynomial_fit,
    verify_sandwich,
)
from .fock import cross_validate_block
from .linalg import hermitian_eigendecomposition, max_abs, normal_eigendecomposition
from .rational import RationalFrequencies
from .sampling import random_hermitian, random_lie_element, random_unitary
from .spectrum import classify, enumerate_point_spectrum, mu_point_spectrum, unit
from .symbols import from_blocks, from_complex, verify_constant_of_motion


@dataclass(frozen=True)
class Criterion:
    name: str
    keywords: tuple[str, ...]
    time_limit: float
    summary: str
    check: Callable[[int], tuple[bool, str]]

    def matches(self, pattern: str | None) -> bool:
        if not pattern:
            return True
        pattern = pattern.lower()
        return pattern in self.name or pattern in self.keywords


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    elapsed: float
    time_limit: float
    detail: str

    @property
    def passed(self) -> bool:
        return self.ok and self.elapsed <= self.time_limit

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f"{self.elapsed:.2f}s/{self.time_limit:g}s"
        if self.ok and not self.passed:
            timing += " over budget"
        return f"[{status}] {self.name:<24} {timing:>16}  {self.detail}"


def brute_force_levels(parts, K: int) -> np.ndarray:
    """counts[k] = #{n >= 0 : sum n_j parts_j = k}, k <= K, by enumerating every n."""
    parts = [int(v) for v in parts]
    head, last = parts[:-1], parts[-1]
    partial = np.zeros(1, dtype=np.int64)
    for p in head:
        steps = np.arange(K // p + 1, dtype=np.int64) * p
        partial = (partial[:, None] + steps[None, :]).ravel()
        partial = partial[partial <= K]
    counts = np.zeros(K + 1, dtype=np.int64)
    for n in range(K // last + 1):
        shifted = partial + n * last
        shifted = shifted[shifted <= K]
        counts += np.bincount(shifted, minlength=K + 1)
    return counts


# 1. harmonic oscillator


def check_harmonic_pin(seed: int) -> tuple[bool, str]:
    for d in (1, 2, 3):
        A = from_blocks(np.zeros((d, d)), np.eye(d))
        found = classify(A)
        if not found.discrete or not found.rational.all_negative:
            return False, f"d={d}: harmonic frequencies are {list(A.frequencies)}, expected all -1"
        spec = enumerate_point_spectrum(A, found.rational, cutoff=20)
        half = Fraction(d, 2)
        want = [(k + half, math.comb(d + k - 1, k)) for k in range(0, 21) if k + half <= 20]
        if not spec.complete or list(spec.entries) != want:
            return False, f"d={d}: spectrum below 20 is not N + d/2 with multiplicities C(d+k-1, k)"
    return True, "sigma(H_0) = N + d/2 exactly for d = 1, 2, 3"


# 2. Fock blocks against the closed form


def check_fock_oracle(seed: int) -> tuple[bool, str]:
    worst = 0.0
    for i in range(50):
        d = 2 + i % 2
        A = random_lie_element(d, seed=seed * 1000 + i)
        for k in range(7):
            report = cross_validate_block(A, k, tol=1e-8)
            worst = max(worst, report.max_pairing_error)
            if not report.matched:
                return False, f"A #{i} (d={d}), k={k}: pairing error {report.max_pairing_error:.2e} > 1e-8"
    return True, f"50 random A, k <= 6: max pairing error {worst:.2e}"


# 3. metaplectic finite group


def _angle_tuples(max_q: int, max_d: int):
    turns = sorted({Fraction(a, q) for q in range(1, max_q + 1) for a in range(q)})
    for d in range(1, max_d + 1):
        yield from itertools.combinations_with_replacement(turns, d)


def _principal_inverse_sqrt_det(thetas: np.ndarray) -> complex:
    z = 1 / complex(np.prod(thetas))
    if z.real < 0 and abs(z.imag) < 1e-9:
        # arg = pi on the branch cut; the principal root takes arg/2 = pi/2
        return 1j * math.sqrt(abs(z))
    return cmath.sqrt(z)


def _closure(thetas: np.ndarray, n_max: int = 20) -> list[complex]:
    pw = np.conj(thetas)[:, None] ** np.arange(n_max + 1)[None, :]
    prod = np.ones(1, dtype=complex)
    for row in pw:
        prod = (prod[:, None] * row[None, :]).ravel()
        prod = _dedup(prod)
    return list(_principal_inverse_sqrt_det(thetas) * prod)


def _dedup(values: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Distinct unit-circle values; sorting by angle puts near-equal ones next to each other."""
    kept: list[complex] = []
    for z in values[np.argsort(np.angle(values), kind="stable")]:
        if not kept or abs(z - kept[-1]) > tol:
            kept.append(z)
    if len(kept) > 1 and abs(kept[-1] - kept[0]) <= tol:
        kept.pop()
    return np.array(kept, dtype=complex)


def _same_set(a, b, tol: float = 1e-9) -> bool:
    if len(a) != len(b):
        return False
    rest = list(b)
    for z in a:
        j = min(range(len(rest)), key=lambda i: abs(rest[i] - z))
        if abs(rest[j] - z) > tol:
            return False
        rest.pop(j)
    return True


def check_mu_finite_group(seed: int) -> tuple[bool, str]:
    count = 0
    for angles in _angle_tuples(8, 3):
        g = np.diag([unit(a) for a in angles])
        result = mu_point_spectrum(g, angles=angles)
        oracle = _closure(np.diag(g))
        if not _same_set(result.elements, oracle):
            return False, f"angles {[str(a) for a in angles]}: {len(result.elements)} elements vs closure of {len(oracle)}"
        count += 1
    fourier = mu_point_spectrum(-1j * np.eye(2))
    if set(fourier.elements) != {1, -1, 1j, -1j}:
        return False, f"Fourier case gave {fourier.elements}"
    return True, f"{count} angle tuples match the closure; Fourier case is {{1, -1, i, -i}}"


# 4. denumerants and quasi-polynomials


def check_denumerant(seed: int) -> tuple[bool, str]:
    cases = 0
    for d in range(1, 5):
        for p in itertools.combinations_with_replacement(range(1, 7), d):
            want = brute_force_levels(p, 60)
            got = denumerant_table(p, 60)
            if list(want) != got:
                return False, f"p={p}: denumerant differs from enumeration"
            fit = quasi_polynomial_fit(p)
            window = 2 * d * math.lcm(*p)
            table = denumerant_table(p, window)
            if fit.degree != d - 1 or any(fit(k) != table[k] for k in range(window + 1)):
                return False, f"p={p}: quasi-polynomial fit does not reproduce its window"
            cases += 1
    return True, f"{cases} part vectors, k <= 60 enumerated; every fit exact with degree d-1"


# 5. Ehrhart sandwich


def check_ehrhart_sandwich(seed: int) -> tuple[bool, str]:
    cases = 0
    aligned_seen = 0
    for d in range(1, 5):
        for mags in itertools.combinations_with_replacement(range(1, 5), d):
            p = tuple(-m for m in mags)
            rf = RationalFrequencies(Fraction(1, 1 + cases % 3), p)
            L = math.lcm(*mags)
            for q in (L, 2 * L):
                poly = ehrhart_polynomial(p, q)
                c = poly.coefficients
                if c[0] != 1 or c[d] != Fraction(q**d, math.factorial(d) * math.prod(mags)):
                    return False, f"p={p}, q={q}: wrong c_0 or c_d"
                if c[d - 1] != poly.lattice_half_boundary:
                    return False, f"p={p}, q={q}: c_(d-1) = {c[d - 1]} but half lattice boundary is {poly.lattice_half_boundary}"
                step = q * rf.x / 4
                for i in range(200):
                    res = verify_sandwich(rf, rf.ground_shift + i * step, q=q)
                    aligned_seen += res.aligned
                    if not res.holds:
                        return False, f"p={p}, q={q}, r=E_0+{i}*{step}: {res}"
                cases += 1
    return True, f"{cases} (p, q) pairs x 200 r values ({aligned_seen} aligned); coefficients exact"


# 6. Weyl law

WEYL_SETS = ((-1, -1), (-1, -2), (-1, -1, -1), (-1, -2, -3))
WEYL_HBARS = (Fraction(1), Fraction(1, 2), Fraction(1, 10))
WEYL_BOUND = 5.0
EUCLIDEAN_LIMIT = 0.5 - 1 / math.sqrt(2)


def check_weyl(seed: int) -> tuple[bool, str]:
    sups = []
    for p in WEYL_SETS:
        A = from_blocks(np.zeros((len(p), len(p))), np.diag([-float(v) for v in p]))
        rf = classify(A).rational
        for hbar in WEYL_HBARS:
            scan = remainder_scan(A, rf, hbar, 200)
            sups.append(scan.sup_normalized)
            if scan.sup_normalized > WEYL_BOUND:
                return False, f"p={p}, hbar={hbar}: sup |remainder|/X^(d-2) = {scan.sup_normalized:.3f} > {WEYL_BOUND}"
    rf = RationalFrequencies(Fraction(1), (-1, -1))
    X = 200 * rf.q_lcm * rf.x + rf.ground_shift
    worst = 0.0
    for hbar in WEYL_HBARS:
        est = weyl_estimate(None, rf, hbar, hbar * X)
        worst = max(worst, abs(est.remainder_paper / float(X) - EUCLIDEAN_LIMIT))
    if worst > 1e-3:
        return False, f"Euclidean-variant remainder/X is off 1/2 - 1/sqrt(2) by {worst:.2e}"
    constants = ", ".join(f"{v:.3f}" for v in sups[::3])
    return True, f"sup normalized remainders {max(sups):.3f} <= {WEYL_BOUND} (hbar=1: {constants}); Euclidean variant off by {worst:.1e}"


# 7. hbar rescaling


def check_hbar_rescaling(seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed + 7)
    cache = {}
    for i in range(100):
        p = WEYL_SETS[i % len(WEYL_SETS)]
        rf = RationalFrequencies(Fraction(1, 1 + i % 3), p)
        hbar = Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 40)))
        r = hbar * Fraction(int(rng.integers(-40, 400)), int(rng.integers(1, 12)))
        got = counting_function_hbar(rf, hbar, r)
        if got != counting_function(rf, r / hbar):
            return False, f"p={p}, hbar={hbar}, r={r}: N^hbar(r) != N(r/hbar)"
        # independent count of hbar * (E_0 + x k) <= r over enumerated levels
        key = tuple(-v for v in p)
        if key not in cache:
            cache[key] = np.cumsum(brute_force_levels(key, 1200))
        levels = (r / hbar - rf.ground_shift) / rf.x
        want = 0 if levels < 0 else int(cache[key][math.floor(levels)])
        if got != want:
            return False, f"p={p}, hbar={hbar}, r={r}: {got} vs enumerated {want}"
    return True, "100 random rational (hbar, r): N^hbar(r) = N(r/hbar) = enumerated count"


# 8. constant of motion


def check_constant_of_motion(seed: int) -> tuple[bool, str]:
    worst = 0.0
    for i in range(50):
        A = random_lie_element(1 + i % 4, seed=seed * 1000 + i)
        err = verify_constant_of_motion(A, sample_count=100, seed=seed + i)
        worst = max(worst, err)
        if err > 1e-9:
            return False, f"A #{i}: p_A drifts by {err:.2e} along the harmonic flow"
    return True, f"50 random A, 100 samples each: max drift {worst:.2e}"


# 9. coarea identities and the symbol ellipsoid


def check_coarea(seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed + 9)
    h = 1e-5
    worst = 0.0
    for _ in range(20):
        d = int(rng.integers(1, 5))
        s = list(-rng.uniform(0.5, 3.0, size=d))
        t = float(rng.uniform(0.5, 5.0))
        norm = math.sqrt(sum(v * v for v in s))
        dp = (polytope_volume(s, t + h) - polytope_volume(s, t - h)) / (2 * h)
        de = (ellipsoid_volume(s, t + h) - ellipsoid_volume(s, t - h)) / (2 * h)
        rel1 = abs(dp * norm - face_volume(s, t)) / face_volume(s, t)
        rel2 = abs(de - surface_integral(s, t)) / surface_integral(s, t)
        worst = max(worst, rel1, rel2)
        if rel1 > 1e-6 or rel2 > 1e-6:
            return False, f"s={s}, t={t}: relative errors {rel1:.2e}, {rel2:.2e}"
    sigmas = []
    for d in (1, 2, 3):
        s = -rng.uniform(0.5, 2.0, size=d)
        U = random_unitary(d, seed=seed + 100 + d)
        A = from_complex(U @ np.diag(1j * s) @ U.conj().T)
        est, err = monte_carlo_sublevel_volume(A, 1.0, samples=1_000_000, seed=seed + d)
        z = abs(est - ellipsoid_volume(A.frequencies, 1.0)) / err
        sigmas.append(z)
        if z > 3:
            return False, f"d={d}: Monte Carlo volume is {z:.2f} standard errors from the ellipsoid"
    return True, f"20 sets: max relative error {worst:.1e}; Monte Carlo within {max(sigmas):.2f} sigma"


# 10. linear algebra contracts


def _decompose(seed: int):
    n = 1 + seed % 12
    kind = seed % 4
    if kind == 0:
        m = random_hermitian(n, seed)
        return "hermitian", m, hermitian_eigendecomposition(m), None
    if kind == 1:
        h = random_hermitian(n, seed)
        u = random_unitary(n, seed)
        m = u.conj().T @ h @ u
        m = 0.5 * (m + m.conj().T)
        return "conjugated", m, hermitian_eigendecomposition(m), hermitian_eigendecomposition(h).values
    if kind == 2:
        m = random_unitary(n, seed)
        return "unitary", m, normal_eigendecomposition(m), None
    m = 1j * random_hermitian(n, seed)
    return "normal", m, normal_eigendecomposition(m), None


def check_linalg(seed: int) -> tuple[bool, str]:
    worst_u = worst_r = 0.0
    for i in range(200):
        kind, m, eig, reference = _decompose(seed * 1000 + i)
        V, lam = eig.vectors, eig.values
        unitarity = eig.unitarity_error()
        residual = max_abs(m @ V - V * lam[None, :])
        worst_u, worst_r = max(worst_u, unitarity), max(worst_r, residual)
        tag = f"input #{i} ({kind}, n={len(m)})"
        if unitarity > 1e-10 or residual > 1e-10 or eig.residual > 1e-10:
            return False, f"{tag}: unitarity {unitarity:.2e}, residual {residual:.2e}"
        if abs(np.sum(lam) - np.trace(m)) > 1e-8:
            return False, f"{tag}: trace mismatch"
        det = np.linalg.det(m)
        if abs(np.prod(lam) - det) > 1e-8 * max(1.0, abs(det)):
            return False, f"{tag}: determinant mismatch"
        if reference is not None and max_abs(lam - reference) > 1e-8:
            return False, f"{tag}: eigenvalues change under unitary conjugation"
        if kind in ("hermitian", "conjugated"):
            if np.any(np.diff(lam.real) < 0) or max_abs(lam.imag) > 1e-12:
                return False, f"{tag}: eigenvalues not real and ascending"
        else:
            rotated = V.conj().T @ m @ V
            if max_abs(rotated - np.diag(np.diag(rotated))) > 1e-8:
                return False, f"{tag}: V*NV is not diagonal"
            if kind == "unitary" and np.max(np.abs(np.abs(lam) - 1)) > 1e-10:
                return False, f"{tag}: eigenvalues off the unit circle"
    return True, f"200 inputs: max unitarity error {worst_u:.1e}, max residual {worst_r:.1e}"


CRITERIA: tuple[Criterion, ...] = (
    Criterion("harmonic-pin", ("spectrum", "harmonic"), 1.0,
              "sigma(H_0) = N + d/2 below 20 for d = 1, 2, 3", check_harmonic_pin),
    Criterion("fock-oracle", ("fock",), 60.0,
              "Hermite-level blocks match the closed-form spectrum", check_fock_oracle),
    Criterion("mu-finite-group", ("spectrum", "mu"), 10.0,
              "mu(g) spectrum equals the closure of its eigenvalue powers", check_mu_finite_group),
    Criterion("denumerant-quasi", ("combinatorics",), 30.0,
              "denumerants and quasi-polynomial fits against enumeration", check_denumerant),
    Criterion("ehrhart-sandwich", ("combinatorics", "ehrhart"), 60.0,
              "Ehrhart bounds on N(r) and exact coefficients", check_ehrhart_sandwich),
    Criterion("weyl-law", ("asymptotics", "weyl"), 120.0,
              "bounded two-term remainders; Euclidean-variant limit", check_weyl),
    Criterion("hbar-rescaling", ("asymptotics", "weyl"), 5.0,
              "N^hbar(r) = N(r/hbar) exactly", check_hbar_rescaling),
    Criterion("constant-of-motion", ("symbols",), 5.0,
              "p_A is invariant under the harmonic flow", check_constant_of_motion),
    Criterion("coarea", ("asymptotics", "weyl"), 60.0,
              "volume derivatives and Monte Carlo ellipsoid volume", check_coarea),
    Criterion("linalg-contracts", ("linalg",), 30.0,
              "eigendecomposition invariants on random inputs", check_linalg),
)


def run_one(criterion: Criterion, seed: int = 0) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = criterion.check(seed)
    except Exception as exc:  # a crash is a failure, reported with its type
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(criterion.name, ok, time.perf_counter() - start, criterion.time_limit, detail)


def run(pattern: str | None = None, seed: int = 0) -> list[CheckResult]:
    return [run_one(c, seed) for c in CRITERIA if c.matches(pattern)]
