"""Seeded random inputs for property checks."""

from __future__ import annotations

import numpy as np

from .symbols import LieAlgebraElement, from_blocks


def rng_of(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_hermitian(n: int, seed=None) -> np.ndarray:
    rng = rng_of(seed)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (x + x.conj().T)


def random_unitary(n: int, seed=None, rotations: int | None = None) -> np.ndarray:
    """Product of random complex Givens rotations and a random diagonal phase."""
    rng = rng_of(seed)
    u = np.diag(np.exp(2j * np.pi * rng.uniform(size=n)))
    if n == 1:
        return u
    for _ in range(rotations if rotations is not None else 3 * n * n):
        p, q = rng.choice(n, size=2, replace=False)
        theta = rng.uniform(0, 2 * np.pi)
        phi = rng.uniform(0, 2 * np.pi)
        c, s = np.cos(theta), np.sin(theta) * np.exp(1j * phi)
        g = np.eye(n, dtype=complex)
        g[p, p] = c
        g[p, q] = -s.conjugate()
        g[q, p] = s
        g[q, q] = c
        u = g @ u
    return u


def random_lie_element(d: int, seed=None, scale: float = 1.0) -> LieAlgebraElement:
    rng = rng_of(seed)
    b = rng.normal(size=(d, d)) * scale
    c = rng.normal(size=(d, d)) * scale
    return from_blocks(b - b.T, c + c.T)


def harmonic(d: int) -> LieAlgebraElement:
    return from_blocks(np.zeros((d, d)), np.eye(d))


def angular_momentum(d: int = 2, i: int = 0, j: int = 1) -> LieAlgebraElement:
    b = np.zeros((d, d))
    b[i, j] = 1.0
    b[j, i] = -1.0
    return from_blocks(b, np.zeros((d, d)))
