"""Elements of u(d) in real block form and their quadratic symbols.

An element is stored as the pair (B, C) with B antisymmetric and C
symmetric; as a real 2d x 2d matrix it is ``[[B, C], [-C, B]]``. Under
``(x, xi) -> x + i*xi`` that matrix acts on C^d as ``B - iC``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError, NotAntisymmetric, NotSymmetric, ShapeMismatch
from .io import parse_real
from .linalg import hermitian_eigendecomposition, max_abs

# Sign of the imaginary part in the complex form B + sign*iC. The value -1
# makes (B=0, C=I) the harmonic oscillator with spectrum N_0 + d/2.
COMPLEX_FORM_SIGN = -1

BLOCK_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    d: int
    B: np.ndarray
    C: np.ndarray
    complex_form: np.ndarray
    frequencies: np.ndarray
    eigenbasis: np.ndarray
    ground_shift: float

    def real_form(self) -> np.ndarray:
        """The 2d x 2d real matrix [[B, C], [-C, B]]."""
        return np.block([[self.B, self.C], [-self.C, self.B]])

    def __call__(self, x, xi) -> float:
        return symbol_eval(self, x, xi)

    def to_json(self) -> dict:
        return {"d": self.d, "B": self.B.tolist(), "C": self.C.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "LieAlgebraElement":
        try:
            B = [[parse_real(v) for v in row] for row in obj["B"]]
            C = [[parse_real(v) for v in row] for row in obj["C"]]
        except (KeyError, TypeError) as exc:
            raise InputValidationError(f"malformed matrix problem: {exc}") from exc
        el = from_blocks(B, C)
        if "d" in obj and obj["d"] != el.d:
            raise ShapeMismatch(f"declared d={obj['d']} but blocks are {el.d}x{el.d}")
        return el


@dataclass(frozen=True, eq=False)
class WeylOperatorCoefficients:
    """Coefficients of the Weyl-quantized operator Op^hbar(p_A) for A in u(d).

    The operator is
    ``-(1/2) sum second_order[j,k] d_j d_k + i sum first_order[j,k] x_k d_j
    + (1/2) sum potential[j,k] x_j x_k + zeroth_order``
    so ``second_order = hbar^2 C``, ``first_order = hbar B``, ``potential = C``.
    """

    hbar: float
    second_order: np.ndarray
    first_order: np.ndarray
    potential: np.ndarray
    zeroth_order: float


def _real_square(m, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeMismatch(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ShapeMismatch(f"{name} has non-finite entries")
    return a


def from_blocks(B, C, tol: float = BLOCK_TOL) -> LieAlgebraElement:
    """Build an element of u(d) from an antisymmetric B and a symmetric C."""
    B = _real_square(B, "B")
    C = _real_square(C, "C")
    if B.shape != C.shape:
        raise ShapeMismatch(f"B is {B.shape} but C is {C.shape}")
    if max_abs(B + B.T) > tol:
        raise NotAntisymmetric(f"B is not antisymmetric: max|B + B^T| = {max_abs(B + B.T):.3e}")
    if max_abs(C - C.T) > tol:
        raise NotSymmetric(f"C is not symmetric: max|C - C^T| = {max_abs(C - C.T):.3e}")
    # exact (anti)symmetry from here on
    B = 0.5 * (B - B.T)
    C = 0.5 * (C + C.T)
    d = B.shape[0]
    a_c = B + COMPLEX_FORM_SIGN * 1j * C
    # A v = i s v  <=>  (-iA) v = s v, and -iA is Hermitian
    eig = hermitian_eigendecomposition(-1j * a_c)
    s = eig.values
    ground_shift = -0.5 * float(np.sum(s))
    check = (0.5j * np.trace(a_c)).real
    if abs(ground_shift - check) > 1e-10 * (1.0 + abs(check)):
        raise AssertionError("ground shift disagrees with (i/2) tr(A)")
    return LieAlgebraElement(
        d=d,
        B=B,
        C=C,
        complex_form=a_c,
        frequencies=s,
        eigenbasis=eig.vectors,
        ground_shift=ground_shift,
    )


def from_complex(a_c, tol: float = 1e-10) -> LieAlgebraElement:
    """Inverse of the complex-form map, for anti-Hermitian ``a_c``."""
    a = np.asarray(a_c, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    if max_abs(a + a.conj().T) > tol:
        raise InputValidationError("matrix is not anti-Hermitian")
    B = a.real
    C = COMPLEX_FORM_SIGN * a.imag
    return from_blocks(0.5 * (B - B.T), 0.5 * (C + C.T), tol=tol)


def symplectic_matrix(d: int) -> np.ndarray:
    eye = np.eye(d)
    zero = np.zeros((d, d))
    return np.block([[zero, eye], [-eye, zero]])


def _vec(v, d: int, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.shape[-1:] != (d,):
        raise ShapeMismatch(f"{name} must have trailing length {d}, got shape {a.shape}")
    return a


def symbol_eval(A: LieAlgebraElement, x, xi) -> float:
    """p_A(x, xi) = <x, Cx>/2 - <x, B xi> + <xi, C xi>/2.

    Broadcasts over leading axes of ``x`` and ``xi``.
    """
    x = _vec(x, A.d, "x")
    xi = _vec(xi, A.d, "xi")
    value = (
        0.5 * np.einsum("...j,jk,...k->...", x, A.C, x)
        - np.einsum("...j,jk,...k->...", x, A.B, xi)
        + 0.5 * np.einsum("...j,jk,...k->...", xi, A.C, xi)
    )
    return float(value) if np.ndim(value) == 0 else value


def symbol_bilinear(A: LieAlgebraElement, w) -> float:
    """The same symbol written as -(1/2) w . (A J) w on R^{2d}."""
    w = _vec(w, 2 * A.d, "w")
    m = A.real_form() @ symplectic_matrix(A.d)
    return float(-0.5 * w @ m @ w)


def weyl_operator_coefficients(A: LieAlgebraElement, hbar: float = 1.0) -> WeylOperatorCoefficients:
    if hbar <= 0:
        raise InputValidationError(f"hbar must be positive, got {hbar}")
    return WeylOperatorCoefficients(
        hbar=float(hbar),
        second_order=hbar**2 * A.C,
        first_order=hbar * A.B,
        potential=A.C.copy(),
        zeroth_order=-0.5 * hbar * float(np.trace(A.B)),
    )


def harmonic_flow(t: float, x, xi) -> tuple[np.ndarray, np.ndarray]:
    """Classical harmonic-oscillator flow, i.e. multiplication by exp(-it) on x + i*xi."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    c, s = np.cos(t), np.sin(t)
    return x * c + xi * s, -x * s + xi * c


def flow_matrix(t: float, d: int) -> np.ndarray:
    c, s = np.cos(t), np.sin(t)
    eye = np.eye(d)
    return np.block([[c * eye, s * eye], [-s * eye, c * eye]])


def verify_constant_of_motion(A: LieAlgebraElement, sample_count: int = 100, seed: int = 0) -> float:
    """Largest |p_A(phi_t(w)) - p_A(w)| over random times and phase-space points."""
    if sample_count < 1:
        raise InputValidationError("sample_count must be >= 1")
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 2.0 * np.pi, size=sample_count)
    x = rng.normal(size=(sample_count, A.d))
    xi = rng.normal(size=(sample_count, A.d))
    xt, xit = harmonic_flow(t[:, None], x, xi)
    before = symbol_eval(A, x, xi)
    after = symbol_eval(A, xt, xit)
    return float(np.max(np.abs(after - before)))
