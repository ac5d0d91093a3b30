import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from metaspec.errors import NoConvergence, NotHermitian, NotNormal, ShapeMismatch
from metaspec.linalg import (
    _jacobi,
    _round_robin,
    hermitian_eigendecomposition,
    max_abs,
    normal_eigendecomposition,
    validate_unitary,
)
from metaspec.sampling import random_hermitian, random_unitary


def assert_contract(m, eig, tol=1e-10):
    assert eig.unitarity_error() <= tol
    assert eig.residual <= tol
    assert max_abs(m @ eig.vectors - eig.vectors * eig.values) <= tol


def test_diagonal_input():
    eig = hermitian_eigendecomposition(np.diag([-1.0, -1.0]))
    assert np.allclose(eig.values, [-1, -1])
    assert np.allclose(eig.vectors, np.eye(2))


def test_swap_matrix():
    eig = hermitian_eigendecomposition([[0, 1], [1, 0]])
    assert np.allclose(eig.values, [-1, 1])
    for j, sign in ((0, -1), (1, 1)):
        v = eig.vectors[:, j]
        want = np.array([1, sign]) / np.sqrt(2)
        assert abs(abs(np.vdot(want, v)) - 1) < 1e-12


def test_against_exact_characteristic_polynomial():
    h = random_hermitian(5, seed=3)
    lam = sympy.symbols("lam")
    exact = sympy.Matrix(5, 5, lambda i, j: sympy.Rational(h[i, j].real) + sympy.I * sympy.Rational(h[i, j].imag))
    poly = sympy.Poly((exact - lam * sympy.eye(5)).det(), lam)
    coeffs = [complex(sympy.N(c, 30)) for c in poly.all_coeffs()]
    roots = np.sort(np.roots(coeffs).real)
    assert np.max(np.abs(roots - hermitian_eigendecomposition(h).values)) < 1e-8


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 40])
def test_random_hermitian_contract(n):
    h = random_hermitian(n, seed=n)
    eig = hermitian_eigendecomposition(h)
    assert_contract(h, eig)
    assert np.all(np.diff(eig.values) >= 0)
    assert np.allclose(eig.values, np.linalg.eigvalsh(h), atol=1e-10)


def test_degenerate_spectrum():
    u = random_unitary(6, seed=1)
    h = u @ np.diag([1, 1, 1, 2, 2, 5.0]) @ u.conj().T
    eig = hermitian_eigendecomposition(0.5 * (h + h.conj().T))
    assert_contract(h, eig)
    assert np.allclose(eig.values, [1, 1, 1, 2, 2, 5])


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigendecomposition([[0, 1], [0, 0]])


def test_shape_errors():
    with pytest.raises(ShapeMismatch):
        hermitian_eigendecomposition(np.zeros((2, 3)))
    with pytest.raises(ShapeMismatch):
        hermitian_eigendecomposition([[np.nan]])


def test_sweep_budget_reports_residual():
    with pytest.raises(NoConvergence) as info:
        _jacobi(random_hermitian(6, seed=0).astype(complex), max_sweeps=1)
    assert info.value.residual > 0


def test_round_robin_covers_every_pair_once():
    for n in range(2, 10):
        pairs = [(p, q) for P, Q in _round_robin(n) for p, q in zip(P, Q)]
        assert sorted(pairs) == [(p, q) for p in range(n) for q in range(p + 1, n)]
        for P, Q in _round_robin(n):
            assert len(set(P) | set(Q)) == 2 * len(P)


def test_normal_examples():
    eig = normal_eigendecomposition(np.diag([1j, -1j]))
    assert sorted(eig.values, key=lambda z: z.imag) == pytest.approx([-1j, 1j])
    eig = normal_eigendecomposition([[0, 1], [-1, 0]])
    assert sorted(eig.values, key=lambda z: z.imag) == pytest.approx([-1j, 1j])


def test_random_unitary_4x4():
    g = random_unitary(4, seed=11)
    eig = normal_eigendecomposition(g)
    assert np.max(np.abs(np.abs(eig.values) - 1)) < 1e-10
    rotated = eig.vectors.conj().T @ g @ eig.vectors
    assert max_abs(rotated - np.diag(np.diag(rotated))) < 1e-8
    assert_contract(g, eig)


def test_unitary_with_degenerate_real_parts():
    # eigenvalues exp(+-i t) share a real part; the skew part separates them
    u = random_unitary(4, seed=5)
    g = u @ np.diag(np.exp(1j * np.array([0.7, -0.7, 0.7, 2.0]))) @ u.conj().T
    eig = normal_eigendecomposition(g)
    assert_contract(g, eig)
    assert sorted(np.angle(eig.values)) == pytest.approx([-0.7, 0.7, 0.7, 2.0])


def test_not_normal():
    with pytest.raises(NotNormal):
        normal_eigendecomposition([[1, 1], [0, 1]])


def test_validate_unitary():
    t = 0.7
    assert validate_unitary(np.eye(3))
    assert not validate_unitary(np.diag([2, 1]))
    assert validate_unitary([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
    assert not validate_unitary(np.zeros((2, 3)))


@given(st.integers(1, 12), st.integers(0, 10**6))
def test_conjugation_invariance(n, seed):
    h = random_hermitian(n, seed)
    u = random_unitary(n, seed + 1)
    m = u.conj().T @ h @ u
    a = hermitian_eigendecomposition(h).values
    b = hermitian_eigendecomposition(0.5 * (m + m.conj().T)).values
    assert np.max(np.abs(a - b)) < 1e-8


@given(st.integers(1, 12), st.integers(0, 10**6), st.sampled_from(["hermitian", "unitary", "skew"]))
def test_trace_and_determinant(n, seed, kind):
    if kind == "hermitian":
        m = random_hermitian(n, seed)
        values = hermitian_eigendecomposition(m).values
    elif kind == "unitary":
        m = random_unitary(n, seed)
        values = normal_eigendecomposition(m).values
    else:
        m = 1j * random_hermitian(n, seed)
        values = normal_eigendecomposition(m).values
    det = np.linalg.det(m)
    assert abs(np.sum(values) - np.trace(m)) < 1e-8
    assert abs(np.prod(values) - det) < 1e-8 * max(1.0, abs(det))


@pytest.mark.parametrize("scale", [1e-313, 1e-200, 1e200])
def test_jacobi_is_scale_invariant(scale):
    H = np.array([[2.0, 1 - 1j], [1 + 1j, -1.0]])
    base = hermitian_eigendecomposition(H).values
    got = hermitian_eigendecomposition(scale * H).values
    assert np.all(np.isfinite(got))
    assert np.allclose(got / scale, base, rtol=1e-6 if scale < 1e-300 else 1e-12)
