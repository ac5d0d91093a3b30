import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import enumerate_points
from metaspec.errors import AngleInconsistent, InconsistentExactData, NotDiscrete, NotUnitary, ReconstructionFailed
from metaspec.fock import block_matrix_hamiltonian
from metaspec.linalg import hermitian_eigendecomposition
from metaspec.rational import RationalFrequencies, approximate, rationalize
from metaspec.sampling import angular_momentum, harmonic, random_lie_element, random_unitary
from metaspec.spectrum import (
    DENSE,
    FINITE_GROUP,
    FULL_CIRCLE,
    INFINITE,
    UNIFORMLY_DISCRETE,
    classify,
    enumerate_point_spectrum,
    mu_point_spectrum,
    unit,
)
from metaspec.symbols import from_blocks, from_complex

SQRT2 = math.sqrt(2)


def diagonal_element(s):
    return from_blocks(np.zeros((len(s), len(s))), np.diag([-float(v) for v in s]))


# rationalize


def test_rationalize_exact_fractions():
    rf = rationalize([Fraction(-1, 2), Fraction(-1, 3)])
    assert (rf.x, rf.p, rf.g, rf.q_lcm) == (Fraction(1, 6), (-3, -2), 1, 6)
    assert rf.exact


def test_rationalize_integers():
    rf = rationalize([-1.0, -1.0])
    assert (rf.x, rf.p, rf.g, rf.q_lcm) == (1, (-1, -1), 1, 1)


def test_rationalize_irrational_ratio_fails():
    with pytest.raises(ReconstructionFailed) as info:
        rationalize([-1.0, -SQRT2], max_denominator=10**6, tol=1e-12)
    assert info.value.worst_residual > 1e-12


def test_rationalize_common_irrational_scale():
    # s = sqrt(2) * (-1, -2): commensurable with an irrational x
    with pytest.raises(ReconstructionFailed):
        rationalize([-SQRT2, -2 * SQRT2])
    rf = rationalize([-SQRT2, -2 * SQRT2], allow_irrational_scale=True)
    assert rf.p == (-1, -2) and not rf.exact
    assert float(rf.x) == pytest.approx(SQRT2)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=30), min_size=1, max_size=5))
def test_rationalize_reproduces_exact_input(values):
    rf = rationalize(values)
    assert list(rf.frequencies) == [Fraction(v) for v in values]
    nonzero = [abs(v) for v in rf.p if v]
    if nonzero:
        assert all(v % rf.g == 0 for v in nonzero)
        if all(rf.p):
            assert all(rf.q_lcm % v == 0 for v in nonzero)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=30), min_size=1, max_size=4))
def test_rationalize_numeric_within_tolerance(values):
    rf = rationalize([float(v) for v in values])
    assert max(abs(float(a) - float(b)) for a, b in zip(rf.frequencies, values)) <= 1e-9


def test_approximate_convergents():
    assert approximate(0.333333333333, 1000, 1e-9) == Fraction(1, 3)
    assert approximate(math.pi, 100, 1e-9) is None


# classify


def test_classify_examples():
    found = classify(harmonic(3))
    assert found.kind == UNIFORMLY_DISCRETE and found.generator == 1
    found = classify(angular_momentum())
    assert found.kind == UNIFORMLY_DISCRETE and found.generator == 1
    found = classify([-1.0, -SQRT2], max_denominator=10**6, tol=1e-12)
    assert found.kind == DENSE and found.heuristic and found.rational is None


def test_classify_exact_mode():
    rf = RationalFrequencies(Fraction(1), (-1, -2))
    found = classify(diagonal_element([-1, -2]), rf)
    assert found.kind == UNIFORMLY_DISCRETE and not found.heuristic and found.rational is rf
    with pytest.raises(InconsistentExactData):
        classify(diagonal_element([-1, -3]), rf)
    with pytest.raises(InconsistentExactData):
        classify(harmonic(3), rf)


def test_classify_generator_uses_gcd():
    found = classify([Fraction(-2, 3), Fraction(4, 3)])
    assert found.generator == Fraction(2, 3)


# enumerate_point_spectrum


def test_enumerate_harmonic():
    spec = enumerate_point_spectrum(harmonic(2), cutoff=4.5)
    assert spec.entries == ((1, 1), (2, 2), (3, 3), (4, 4)) and spec.complete


def test_enumerate_one_two():
    rf = RationalFrequencies(Fraction(1), (-1, -2))
    spec = enumerate_point_spectrum(None, rf, cutoff=5)
    h = Fraction(1, 2)
    assert spec.entries == ((3 * h, 1), (5 * h, 1), (7 * h, 2), (9 * h, 2))
    points = enumerate_points((1, 2), 3)
    assert spec.expanded() == sorted(Fraction(3, 2) + n1 + 2 * n2 for n1, n2 in points)


def test_enumerate_mixed_signs():
    spec = enumerate_point_spectrum(angular_momentum(), cutoff=3, n_max=5)
    assert spec.values == list(range(-5, 4))
    assert all(m == INFINITE for _, m in spec.entries) and not spec.complete
    with pytest.raises(ValueError):
        spec.expanded()


def test_enumerate_zero_frequency():
    rf = RationalFrequencies(Fraction(1), (-1, 0))
    spec = enumerate_point_spectrum(None, rf, cutoff=Fraction(5, 2), n_max=3)
    assert spec.values == [Fraction(1, 2), Fraction(3, 2), Fraction(5, 2)]
    assert all(m == INFINITE for _, m in spec.entries) and not spec.complete


def test_enumerate_all_positive_is_window():
    rf = RationalFrequencies(Fraction(1), (1, 2))
    spec = enumerate_point_spectrum(None, rf, cutoff=0, n_max=4)
    assert not spec.complete
    assert spec.entries[-1] == (Fraction(-3, 2), 1)
    assert dict(spec.entries)[Fraction(-3, 2) - 2] == 2


def test_enumerate_dense_raises():
    with pytest.raises(NotDiscrete):
        enumerate_point_spectrum(diagonal_element([-1.0, -SQRT2]), cutoff=3)


@given(st.lists(st.integers(-4, -1), min_size=1, max_size=3), st.fractions(min_value=Fraction(1, 5), max_value=3, max_denominator=7))
def test_differences_are_multiples_of_generator(p, x):
    rf = RationalFrequencies(x, tuple(p))
    spec = enumerate_point_spectrum(None, rf, cutoff=rf.ground_shift + 12 * x)
    values = spec.values
    diffs = {b - a for a, b in itertools.combinations(values, 2)}
    assert all((d / rf.generator).denominator == 1 for d in diffs)
    if len(p) >= 2 and rf.g == 1:
        assert rf.generator in diffs


@given(st.lists(st.integers(-4, -1), min_size=1, max_size=3), st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=5))
def test_scale_equivariance(p, c):
    rf = RationalFrequencies(Fraction(1), tuple(p))
    scaled = RationalFrequencies(c, tuple(p))
    a = enumerate_point_spectrum(None, rf, cutoff=rf.ground_shift + 10)
    b = enumerate_point_spectrum(None, scaled, cutoff=scaled.ground_shift + 10 * c)
    assert [(c * (v - rf.ground_shift), m) for v, m in a.entries] == [(v - scaled.ground_shift, m) for v, m in b.entries]


@pytest.mark.parametrize("p", [(-1,), (-1, -1), (-1, -2), (-2, -3), (-1, -1, -2), (-1, -2, -3)])
def test_spectrum_is_union_of_fock_blocks(p):
    rf = RationalFrequencies(Fraction(1, 2), p)
    cutoff = rf.ground_shift + 6
    listed = enumerate_point_spectrum(None, rf, cutoff=cutoff).expanded()
    # conjugate the diagonal form by a random unitary so the blocks are full matrices
    U = random_unitary(len(p), seed=len(p))
    A = from_complex(U @ np.diag([1j * float(v) for v in rf.frequencies]) @ U.conj().T)
    k_max = math.ceil((cutoff - rf.ground_shift) / min(abs(v) for v in rf.frequencies))
    block_values = []
    for k in range(k_max + 1):
        m = block_matrix_hamiltonian(A, k).orthonormal_matrix()
        block_values.extend(hermitian_eigendecomposition(0.5 * (m + m.conj().T)).values)
    below = sorted(v for v in block_values if v <= float(cutoff) + 1e-9)
    assert len(below) == len(listed)
    assert np.max(np.abs(np.array(below) - np.array([float(v) for v in listed]))) <= 1e-8


# mu_point_spectrum


def test_unit_is_exact_at_quarter_turns():
    assert [unit(Fraction(k, 4)) for k in range(4)] == [1, 1j, -1, -1j]
    assert unit(Fraction(-1, 4)) == -1j


def test_fourier_case():
    for result in (mu_point_spectrum(-1j * np.eye(2)), mu_point_spectrum(-1j * np.eye(2), angles=[Fraction(-1, 4)] * 2)):
        assert result.kind == FINITE_GROUP and (result.q, result.p) == (4, 1)
        assert set(result.elements) == {1, -1, 1j, -1j}


def brute_closure(thetas, n_max=20):
    z = 1 / np.prod(thetas)
    phase = 1j * math.sqrt(abs(z)) if (z.real < 0 and abs(z.imag) < 1e-9) else cmath.sqrt(z)
    out = []
    for n in itertools.product(range(n_max + 1), repeat=len(thetas)):
        w = phase * np.prod([np.conj(t) ** k for t, k in zip(thetas, n)])
        if all(abs(w - u) > 1e-9 for u in out):
            out.append(w)
    return out


def same_set(a, b):
    return len(a) == len(b) and all(min(abs(z - w) for w in b) <= 1e-9 for z in a)


def test_half_and_third_turns():
    angles = [Fraction(1, 2), Fraction(1, 3)]
    g = np.diag([unit(a) for a in angles])
    result = mu_point_spectrum(g, angles=angles)
    assert (result.q, result.p) == (6, 1)
    assert same_set(result.elements, brute_closure(np.diag(g), n_max=8))
    assert len(result.elements) == 6


@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=8), min_size=1, max_size=2))
def test_closure_oracle(angles):
    g = np.diag([unit(a) for a in angles])
    result = mu_point_spectrum(g, angles=angles)
    assert same_set(result.elements, brute_closure(np.diag(g), n_max=8))


def test_numeric_mode_on_conjugated_rotation():
    U = random_unitary(3, seed=2)
    angles = [Fraction(1, 5), Fraction(-2, 5), Fraction(1, 2)]
    g = U @ np.diag([unit(a) for a in angles]) @ U.conj().T
    numeric = mu_point_spectrum(g)
    exact = mu_point_spectrum(g, angles=angles)
    assert (numeric.q, numeric.p) == (exact.q, exact.p) == (10, 1)
    assert numeric.phase_turns == exact.phase_turns


def test_irrational_rotation_is_full_circle():
    g = np.diag([cmath.exp(2j * math.pi * SQRT2), 1j])
    result = mu_point_spectrum(g)
    assert result.kind == FULL_CIRCLE and result.elements is None
    assert result.contains(cmath.exp(0.123j))
    assert not result.contains(2.0)
    with pytest.raises(ValueError):
        result.element_turns()


def test_invariants_and_branches():
    angles = [Fraction(1, 3), Fraction(3, 8)]
    g = np.diag([unit(a) for a in angles])
    result = mu_point_spectrum(g, angles=angles)
    plus, minus = result.phase_branches
    assert plus == pytest.approx(-minus)
    assert plus**2 == pytest.approx(1 / np.linalg.det(g))
    assert len(result.residues) == result.q // math.gcd(result.p, result.q)
    assert all(abs(abs(z) - 1) <= 1e-12 for z in result.elements)
    other = result.element_turns("other")
    assert sorted((t - Fraction(1, 2)) % 1 for t in other) == result.element_turns()
    # closed under multiplication once the phase is divided out
    residues = set(result.residues)
    assert all((a + b) % 1 in residues for a in residues for b in residues)


def test_angle_errors():
    g = np.diag([1j, -1])
    with pytest.raises(AngleInconsistent):
        mu_point_spectrum(g, angles=[Fraction(1, 4), Fraction(1, 3)])
    with pytest.raises(AngleInconsistent):
        mu_point_spectrum(g, angles=[Fraction(1, 4)])
    with pytest.raises(NotUnitary):
        mu_point_spectrum(np.diag([2.0, 1.0]))


def test_identity_has_trivial_group():
    result = mu_point_spectrum(np.eye(2), angles=[0, 0])
    assert result.elements == (1,) and result.q == 1
