"""Small dense complex eigensolvers.

Hermitian matrices are diagonalized with cyclic complex Jacobi rotations.
Sweeps use the round-robin (tournament) ordering so that every round is a
set of disjoint rotations, applied at once with numpy broadcasting. Normal
matrices are reduced to two commuting Hermitian problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NoConvergence, NotHermitian, NotNormal, ShapeMismatch

DEFAULT_TOL = 1e-10
MAX_SWEEPS = 60


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenpairs of a matrix: ``M @ vectors[:, j] == values[j] * vectors[:, j]``."""

    values: np.ndarray
    vectors: np.ndarray
    residual: float

    @property
    def dim(self) -> int:
        return len(self.values)

    def unitarity_error(self) -> float:
        v = self.vectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(self.dim)), initial=0.0))


def as_square(m, name="matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeMismatch(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeMismatch(f"{name} has non-finite entries")
    return a


def max_abs(m) -> float:
    return float(np.max(np.abs(m), initial=0.0))


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament schedule covering every pair (p < q) exactly once per sweep."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_diagonal(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return max_abs(off)


def _jacobi(a: np.ndarray, max_sweeps: int = MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize the Hermitian matrix ``a`` in place; returns (a, v) with a = v* a0 v."""
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return a, v
    scale = max(max_abs(a), np.finfo(float).tiny)
    target = 1e-15 * scale
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        if _off_diagonal(a) <= target:
            return a, v
        for P, Q in rounds:
            apq = a[P, Q]
            r = np.abs(apq)
            active = r > 0.25 * target
            if not np.any(active):
                continue
            P, Q, apq, r = P[active], Q[active], apq[active], r[active]
            phase = apq / r
            app = a[P, P].real
            aqq = a[Q, Q].real
            theta = (aqq - app) / (2.0 * r)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # 2x2 block of U = diag(1, conj(phase)) @ [[c, s], [-s, c]]
            u_pp = c.astype(complex)
            u_pq = s.astype(complex)
            u_qp = -s * phase.conj()
            u_qq = c * phase.conj()

            colp, colq = a[:, P].copy(), a[:, Q]
            a[:, P] = colp * u_pp + colq * u_qp
            a[:, Q] = colp * u_pq + colq * u_qq
            rowp, rowq = a[P, :].copy(), a[Q, :]
            a[P, :] = u_pp.conj()[:, None] * rowp + u_qp.conj()[:, None] * rowq
            a[Q, :] = u_pq.conj()[:, None] * rowp + u_qq.conj()[:, None] * rowq
            a[P, Q] = 0.0
            a[Q, P] = 0.0
            idx = np.concatenate([P, Q])
            a[idx, idx] = a[idx, idx].real

            vp, vq = v[:, P].copy(), v[:, Q]
            v[:, P] = vp * u_pp + vq * u_qp
            v[:, Q] = vp * u_pq + vq * u_qq
    if _off_diagonal(a) <= target:
        return a, v
    raise NoConvergence(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps",
        residual=_off_diagonal(a),
    )


def hermitian_eigendecomposition(H, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """Eigenvalues (ascending, real) and orthonormal eigenvectors of a Hermitian matrix.

    Raises NotHermitian if ``max|H - H*| > tol``.
    """
    h = as_square(H, "H")
    asym = max_abs(h - h.conj().T)
    if asym > tol:
        raise NotHermitian(f"matrix is not Hermitian: max|H - H*| = {asym:.3e} > {tol:.1e}")
    a = 0.5 * (h + h.conj().T)
    # exact power-of-two rescale to unit size so rotations cannot underflow
    scale = max_abs(a)
    exponent = int(np.frexp(scale)[1]) if scale > 0.0 and np.isfinite(scale) else 0
    a = np.ldexp(a.real, -exponent) + 1j * np.ldexp(a.imag, -exponent)
    a, v = _jacobi(a)
    values = np.ldexp(np.diag(a).real, exponent)
    order = np.argsort(values, kind="stable")
    values = values[order]
    v = v[:, order]
    residual = max_abs(h @ v - v * values)
    return EigenDecomposition(values=values, vectors=v, residual=residual)


def _clusters(values: np.ndarray, threshold: float) -> list[slice]:
    groups = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > threshold:
            groups.append(slice(start, i))
            start = i
    return groups


def normal_eigendecomposition(N, tol: float = DEFAULT_TOL) -> EigenDecomposition:
    """Eigen-decomposition of a normal matrix (values unsorted, paired with columns).

    The Hermitian part is diagonalized first; inside each of its eigenspaces
    (eigenvalues within ``1e-8 * (1 + |N|)``) the anti-Hermitian part is
    diagonalized. The two parts commute exactly when N is normal.
    """
    n_ = as_square(N, "N")
    comm = max_abs(n_ @ n_.conj().T - n_.conj().T @ n_)
    if comm > tol:
        raise NotNormal(f"matrix is not normal: max|NN* - N*N| = {comm:.3e} > {tol:.1e}")
    herm = 0.5 * (n_ + n_.conj().T)
    skew = (n_ - n_.conj().T) / 2j
    first = hermitian_eigendecomposition(herm, tol=np.inf)
    v = first.vectors.copy()
    threshold = 1e-8 * (1.0 + max_abs(n_))
    for block in _clusters(first.values, threshold):
        if block.stop - block.start == 1:
            continue
        vb = v[:, block]
        inner = vb.conj().T @ skew @ vb
        sub = hermitian_eigendecomposition(0.5 * (inner + inner.conj().T), tol=np.inf)
        v[:, block] = vb @ sub.vectors
    values = np.einsum("ij,ij->j", v.conj(), n_ @ v)
    residual = max_abs(n_ @ v - v * values)
    return EigenDecomposition(values=values, vectors=v, residual=residual)


def validate_unitary(g, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|g* g - I| <= tol``."""
    a = np.asarray(g, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return max_abs(a.conj().T @ a - np.eye(a.shape[0])) <= tol
