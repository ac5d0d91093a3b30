"""Finite Fock blocks: nu_k(g) and -i dnu_k(A) on degree-k polynomials.

Polynomials of degree k in z_1..z_d are stored as coefficient vectors over
the monomials z^alpha, |alpha| = k. Monomials are orthogonal in Fock space
with squared norms proportional to alpha!, so with W = diag(alpha!) the
matrix W^(1/2) M W^(-1/2) is the block in an orthonormal basis. The blocks
are assembled from matrix entries only, never from eigen-data, which keeps
them independent of the closed-form spectra they are checked against.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionCap, InputValidationError, NotUnitary, ShapeMismatch
from .linalg import as_square, hermitian_eigendecomposition, max_abs, validate_unitary
from .symbols import LieAlgebraElement

DIMENSION_CAP = 3000


@dataclass(frozen=True)
class MonomialBasis:
    d: int
    k: int
    indices: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.indices)

    def position(self, alpha: Sequence[int]) -> int:
        return _positions(self.d, self.k)[tuple(alpha)]

    def weights(self) -> np.ndarray:
        """Relative squared Fock norms alpha! of the monomials."""
        return np.array([math.prod(math.factorial(a) for a in alpha) for alpha in self.indices], dtype=float)


@lru_cache(maxsize=128)
def monomial_basis(d: int, k: int) -> MonomialBasis:
    """Exponents of degree k in d variables, graded lexicographic (z_1^k first)."""
    if d < 1 or k < 0:
        raise InputValidationError(f"need d >= 1 and k >= 0, got d={d}, k={k}")
    indices = []
    for combo in itertools.combinations_with_replacement(range(d), k):
        alpha = [0] * d
        for j in combo:
            alpha[j] += 1
        indices.append(tuple(alpha))
    return MonomialBasis(d, k, tuple(indices))


@lru_cache(maxsize=128)
def _positions(d: int, k: int) -> dict:
    return {alpha: i for i, alpha in enumerate(monomial_basis(d, k).indices)}


def block_dimension(d: int, k: int) -> int:
    return math.comb(d + k - 1, k)


def _check_cap(d: int, k: int, cap: int) -> None:
    dim = block_dimension(d, k)
    if dim > cap:
        raise DimensionCap(f"block for d={d}, k={k} has dimension {dim} > cap {cap}")


@dataclass(frozen=True, eq=False)
class FockBlock:
    """Matrix of an operator restricted to degree-k polynomials.

    ``kind`` is "hamiltonian" (-i dnu_k(A)) or "unitary" (nu_k(g));
    ``phase`` is the det(g)^(-1/2) branch used for unitary blocks.
    """

    basis: MonomialBasis
    matrix: np.ndarray
    kind: str
    weights: np.ndarray
    phase: complex = 1.0

    def orthonormal_matrix(self) -> np.ndarray:
        """W^(1/2) M W^(-1/2): the block in the orthonormal monomial basis."""
        root = np.sqrt(self.weights)
        return root[:, None] * self.matrix / root[None, :]

    def structure_error(self) -> float:
        """Distance from Hermitian (hamiltonian) or unitary (unitary) in the orthonormal basis."""
        m = self.orthonormal_matrix()
        if self.kind == "hamiltonian":
            return max_abs(m - m.conj().T)
        return max_abs(m.conj().T @ m - np.eye(len(m)))


def block_matrix_dnu(a_c, k: int, cap: int = DIMENSION_CAP) -> np.ndarray:
    """Matrix of dnu_k(A) in the monomial basis.

    dnu(A) z^alpha = -(1/2) tr(A) z^alpha - sum_{l,m} alpha_l A[l,m] z^(alpha - e_l + e_m).
    """
    a = as_square(a_c, "A")
    d = a.shape[0]
    _check_cap(d, k, cap)
    basis = monomial_basis(d, k)
    pos = _positions(d, k)
    m = np.zeros((basis.dim, basis.dim), dtype=complex)
    half_trace = 0.5 * np.trace(a)
    for col, alpha in enumerate(basis.indices):
        m[col, col] -= half_trace
        for l in range(d):
            if alpha[l] == 0:
                continue
            lowered = list(alpha)
            lowered[l] -= 1
            for mm in range(d):
                if a[l, mm] == 0:
                    continue
                beta = lowered.copy()
                beta[mm] += 1
                m[pos[tuple(beta)], col] -= alpha[l] * a[l, mm]
    return m


def block_matrix_hamiltonian(A: LieAlgebraElement, k: int, cap: int = DIMENSION_CAP) -> FockBlock:
    """-i dnu_k(A), i.e. H_A restricted to the k-th Hermite level."""
    basis = monomial_basis(A.d, k)
    matrix = -1j * block_matrix_dnu(A.complex_form, k, cap)
    return FockBlock(basis, matrix, "hamiltonian", basis.weights())


def _linear_form_product(forms: np.ndarray, exponents: Sequence[int], d: int) -> dict:
    """Expand prod_i (sum_j forms[i, j] z_j)^exponents[i] into {alpha: coefficient}."""
    poly = {tuple([0] * d): 1.0 + 0j}
    for i, n in enumerate(exponents):
        for _ in range(n):
            nxt: dict = {}
            for alpha, c in poly.items():
                for j in range(d):
                    f = forms[i, j]
                    if f == 0:
                        continue
                    beta = list(alpha)
                    beta[j] += 1
                    beta = tuple(beta)
                    nxt[beta] = nxt.get(beta, 0) + c * f
            poly = nxt
    return poly


def _to_vector(poly: dict, d: int, k: int) -> np.ndarray:
    pos = _positions(d, k)
    vec = np.zeros(block_dimension(d, k), dtype=complex)
    for alpha, c in poly.items():
        vec[pos[alpha]] += c
    return vec


def det_inverse_sqrt(g, branch: str = "principal") -> complex:
    """Branch of det(g)^(-1/2); "principal" is the principal square root of 1/det(g)."""
    if branch not in ("principal", "other"):
        raise InputValidationError(f"branch must be 'principal' or 'other', got {branch!r}")
    root = cmath.sqrt(1 / complex(np.linalg.det(g)))
    return root if branch == "principal" else -root


def block_matrix_unitary(g, k: int, branch: str = "principal", cap: int = DIMENSION_CAP) -> FockBlock:
    """nu_k(g): q(z) -> det(g)^(-1/2) q(g^(-1) z) on degree-k polynomials."""
    g = as_square(g, "g")
    if not validate_unitary(g):
        raise NotUnitary("g is not unitary")
    d = g.shape[0]
    _check_cap(d, k, cap)
    basis = monomial_basis(d, k)
    phase = det_inverse_sqrt(g, branch)
    ginv = g.conj().T
    matrix = np.empty((basis.dim, basis.dim), dtype=complex)
    for col, alpha in enumerate(basis.indices):
        # z^alpha(g^-1 z) = prod_j (sum_l ginv[j, l] z_l)^alpha_j
        matrix[:, col] = phase * _to_vector(_linear_form_product(ginv, alpha, d), d, k)
    return FockBlock(basis, matrix, "unitary", basis.weights(), phase)


def predicted_block_spectrum(s: Sequence, E_0, k: int) -> list:
    """{E_0 - sum n_j s_j : |n| = k} with multiplicity, sorted."""
    d = len(s)
    values = []
    for alpha in monomial_basis(d, k).indices:
        values.append(E_0 - sum(n * sj for n, sj in zip(alpha, s)))
    return sorted(values)


def eigenpolynomial(V, n: Sequence[int]) -> np.ndarray:
    """Coefficients of prod_i (sum_j <v_i, e_j> z_j)^(n_i) over monomial_basis(d, |n|).

    ``<v, e_j>`` is conjugate-linear in v, so the i-th linear form has
    coefficients conj(V[:, i]).
    """
    V = as_square(V, "V")
    d = V.shape[0]
    n = [int(v) for v in n]
    if len(n) != d or any(v < 0 for v in n):
        raise ShapeMismatch(f"multi-index must have {d} nonnegative entries, got {n}")
    forms = V.conj().T
    return _to_vector(_linear_form_product(forms, n, d), d, sum(n))


def verify_eigenpair(block: FockBlock, coeffs, lam: complex) -> float:
    """Relative residual |M c - lam c| / |c|."""
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (block.basis.dim,):
        raise ShapeMismatch(f"coefficient vector must have length {block.basis.dim}, got {c.shape}")
    return float(np.linalg.norm(block.matrix @ c - lam * c) / np.linalg.norm(c))


@dataclass(frozen=True)
class CrossValidationReport:
    d: int
    k: int
    dim: int
    matched: bool
    max_pairing_error: float
    convention: str = "forms conj(v_j); monomial weights alpha!"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "dim": self.dim,
            "matched": self.matched,
            "max_error": self.max_pairing_error,
        }


def cross_validate_block(A: LieAlgebraElement, k: int, tol: float = 1e-8, cap: int = DIMENSION_CAP) -> CrossValidationReport:
    """Diagonalize the k-th block and pair its sorted eigenvalues with the closed form."""
    block = block_matrix_hamiltonian(A, k, cap)
    herm = block.orthonormal_matrix()
    asym = max_abs(herm - herm.conj().T)
    numeric = hermitian_eigendecomposition(0.5 * (herm + herm.conj().T)).values
    predicted = predicted_block_spectrum(A.frequencies, A.ground_shift, k)
    error = max(asym, float(np.max(np.abs(numeric - np.asarray(predicted)))))
    return CrossValidationReport(A.d, k, block.basis.dim, error <= tol, error)
