import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import expm

from conftest import enumerate_points
from metaspec.errors import DimensionCap, NotUnitary, ShapeMismatch
from metaspec.fock import (
    block_dimension,
    block_matrix_dnu,
    block_matrix_hamiltonian,
    block_matrix_unitary,
    cross_validate_block,
    eigenpolynomial,
    monomial_basis,
    predicted_block_spectrum,
    verify_eigenpair,
)
from metaspec.linalg import hermitian_eigendecomposition, normal_eigendecomposition
from metaspec.sampling import angular_momentum, harmonic, random_lie_element, random_unitary
from metaspec.spectrum import mu_point_spectrum, unit
from metaspec.symbols import from_blocks, from_complex


def test_monomial_basis():
    for d in range(1, 5):
        for k in range(7):
            b = monomial_basis(d, k)
            assert b.dim == math.comb(d + k - 1, k) == block_dimension(d, k)
            assert all(sum(a) == k for a in b.indices)
            assert list(b.indices) == sorted(set(b.indices), reverse=True)
    assert monomial_basis(2, 2).indices == ((2, 0), (1, 1), (0, 2))
    assert monomial_basis(3, 2).weights().tolist() == [2, 1, 1, 2, 1, 2]


def test_one_dimensional_oscillator():
    A = from_complex(np.array([[-1j]]))
    for k in range(6):
        block = block_matrix_hamiltonian(A, k)
        assert block.matrix.shape == (1, 1)
        assert block.matrix[0, 0] == pytest.approx(k + 0.5)


def test_harmonic_d2_k2():
    block = block_matrix_hamiltonian(harmonic(2), 2)
    assert np.allclose(block.matrix, 3 * np.eye(3))


def test_random_block_matches_closed_form():
    A = random_lie_element(2, seed=6)
    m = block_matrix_hamiltonian(A, 3).orthonormal_matrix()
    numeric = hermitian_eigendecomposition(0.5 * (m + m.conj().T)).values
    assert np.allclose(numeric, predicted_block_spectrum(A.frequencies, A.ground_shift, 3), atol=1e-8)


@given(st.integers(1, 3), st.integers(0, 5), st.integers(0, 10**6))
def test_blocks_are_weighted_hermitian_and_unitary(d, k, seed):
    A = random_lie_element(d, seed)
    assert block_matrix_hamiltonian(A, k).structure_error() <= 1e-9
    g = random_unitary(d, seed)
    assert block_matrix_unitary(g, k).structure_error() <= 1e-9


def test_dimension_cap():
    with pytest.raises(DimensionCap):
        block_matrix_hamiltonian(harmonic(4), 30)
    with pytest.raises(DimensionCap):
        block_matrix_unitary(np.eye(3), 5, cap=10)


def test_unitary_block_examples():
    assert np.allclose(block_matrix_unitary(np.eye(3), 3).matrix, np.eye(10))
    g = np.array([[-1j]])
    entry = block_matrix_unitary(g, 2).matrix[0, 0]
    assert abs(abs(entry) - 1) < 1e-12
    assert mu_point_spectrum(g).contains(entry, tol=1e-10)
    with pytest.raises(NotUnitary):
        block_matrix_unitary(np.diag([2.0, 1.0]), 1)


@pytest.mark.parametrize("d,k", [(2, 3), (3, 2), (2, 5)])
def test_unitary_blocks_compose_up_to_sign(d, k):
    g, h = random_unitary(d, seed=k), random_unitary(d, seed=100 + k)
    lhs = block_matrix_unitary(g @ h, k).matrix
    rhs = block_matrix_unitary(g, k).matrix @ block_matrix_unitary(h, k).matrix
    assert min(np.max(np.abs(lhs - rhs)), np.max(np.abs(lhs + rhs))) < 1e-8


@pytest.mark.parametrize("d,k", [(1, 3), (2, 2), (3, 3)])
def test_one_parameter_group(d, k):
    A = random_lie_element(d, seed=d + k)
    for t in (0.01, 0.1, 0.4):
        group = block_matrix_unitary(expm(t * A.complex_form), k).matrix
        flow = expm(t * block_matrix_dnu(A.complex_form, k))
        assert min(np.max(np.abs(group - flow)), np.max(np.abs(group + flow))) < 1e-6


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lie_homomorphism(d):
    A1, A2 = random_lie_element(d, seed=1), random_lie_element(d, seed=2)
    a1, a2 = A1.complex_form, A2.complex_form
    for k in range(6):
        m1, m2 = block_matrix_dnu(a1, k), block_matrix_dnu(a2, k)
        bracket = block_matrix_dnu(a1 @ a2 - a2 @ a1, k)
        assert np.max(np.abs(bracket - (m1 @ m2 - m2 @ m1))) < 1e-8


def test_predicted_spectrum_examples():
    assert predicted_block_spectrum([-1, -1], 1, 2) == [3, 3, 3]
    h = Fraction(3, 2)
    assert predicted_block_spectrum([-1, -2], h, 2) == [h + 2, h + 3, h + 4]
    assert predicted_block_spectrum([-3, 5, 7], 2.5, 0) == [2.5]
    points = [n for n in enumerate_points((1, 1, 1), 3) if sum(n) == 3]
    want = sorted(Fraction(1) - sum(a * b for a, b in zip(n, (-1, 2, -3))) for n in points)
    assert predicted_block_spectrum([-1, 2, -3], 1, 3) == want


def test_eigenpolynomial_examples():
    coeffs = eigenpolynomial(np.eye(2), (2, 1))
    basis = monomial_basis(2, 3)
    assert coeffs[basis.position((2, 1))] == 1 and np.count_nonzero(coeffs) == 1
    assert eigenpolynomial(random_unitary(3, seed=1), (0, 0, 0)).tolist() == [1]
    with pytest.raises(ShapeMismatch):
        eigenpolynomial(np.eye(2), (1, 0, 0))


def test_angular_momentum_eigenpolynomials():
    A = angular_momentum()
    block = block_matrix_hamiltonian(A, 1)
    for j in range(2):
        coeffs = eigenpolynomial(A.eigenbasis, tuple(1 if i == j else 0 for i in range(2)))
        lam = A.ground_shift - A.frequencies[j]
        assert verify_eigenpair(block, coeffs, lam) < 1e-8
        # proportional to z1 -+ i z2
        ratio = coeffs[1] / coeffs[0]
        assert abs(abs(ratio) - 1) < 1e-12 and abs(ratio.real) < 1e-12


def test_harmonic_monomials_are_eigenvectors():
    block = block_matrix_hamiltonian(harmonic(3), 2)
    for i in range(block.basis.dim):
        e = np.zeros(block.basis.dim)
        e[i] = 1
        assert verify_eigenpair(block, e, 2 + 1.5) < 1e-10


def test_all_eigenpolynomials_of_random_block():
    A = random_lie_element(3, seed=13)
    block = block_matrix_hamiltonian(A, 2)
    residuals = []
    for n in monomial_basis(3, 2).indices:
        lam = A.ground_shift - sum(a * s for a, s in zip(n, A.frequencies))
        coeffs = eigenpolynomial(A.eigenbasis, n)
        residuals.append(verify_eigenpair(block, coeffs, lam))
        assert verify_eigenpair(block, coeffs, lam + 1) >= 0.5
    assert len(residuals) == 6 and max(residuals) < 1e-8
    with pytest.raises(ShapeMismatch):
        verify_eigenpair(block, np.ones(5), 0)


def test_unitary_eigenpolynomials():
    g = random_unitary(2, seed=8)
    eig = normal_eigendecomposition(g)
    block = block_matrix_unitary(g, 3)
    for n in monomial_basis(2, 3).indices:
        lam = block.phase * np.prod([np.conj(t) ** a for t, a in zip(eig.values, n)])
        assert verify_eigenpair(block, eigenpolynomial(eig.vectors, n), lam) < 1e-8


def test_cross_validation_examples():
    report = cross_validate_block(harmonic(3), 4)
    assert report.matched and report.max_pairing_error < 1e-10 and report.dim == 15
    A = from_blocks([[0, 1], [-1, 0]], np.eye(2))
    assert A.frequencies == pytest.approx([-2, 0])
    assert all(cross_validate_block(A, k).matched for k in range(6))
    assert set(report.to_json()) == {"d", "k", "dim", "matched", "max_error"}


def test_cross_validation_random_d2_up_to_k8():
    for seed in range(50):
        A = random_lie_element(2, seed=seed)
        for k in range(9):
            assert cross_validate_block(A, k, tol=1e-8).matched


def test_unitary_block_eigenvalues_lie_in_mu_spectrum():
    U = random_unitary(3, seed=21)
    angles = [Fraction(1, 3), Fraction(-1, 4), Fraction(1, 6)]
    g = U @ np.diag([unit(a) for a in angles]) @ U.conj().T
    spectrum = mu_point_spectrum(g, angles=angles)
    for k in range(5):
        values = normal_eigendecomposition(block_matrix_unitary(g, k).orthonormal_matrix()).values
        assert all(spectrum.contains(z, tol=1e-9) for z in values)
