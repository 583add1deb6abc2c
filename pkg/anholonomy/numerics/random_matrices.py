"""Seeded random matrices and states.

Every generator takes an integer seed and builds its own
``numpy.random.Generator``, so results are bitwise reproducible and never
touch the global numpy state.
"""
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from anholonomy.exceptions import DimensionMismatch
from anholonomy.numerics.operators import HermitianOperator, UnitaryOperator


def _check_dim(n: int) -> None:
    if int(n) != n or n < 1:
        raise DimensionMismatch(f"Dimension must be a positive integer, got {n}")


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex normal samples (unit variance overall)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def haar_random_unitary(n: int, seed: int) -> UnitaryOperator:
    """Haar-distributed unitary: QR of a Ginibre matrix, R-diagonal phases fixed."""
    _check_dim(n)
    rng = np.random.default_rng(seed)
    z = complex_gaussian(rng, (n, n))
    q, r = linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return UnitaryOperator(matrix=q)


def random_hermitian(n: int, seed: int) -> HermitianOperator:
    """GUE-style Hermitian matrix: standard normal real/imaginary parts, symmetrised."""
    _check_dim(n)
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianOperator(matrix=0.5 * (a + a.conj().T))


def random_state(n: int, seed: int, mask: Optional[Sequence[bool]] = None) -> np.ndarray:
    """Normalised random complex vector; entries where ``mask`` is False are zero."""
    _check_dim(n)
    rng = np.random.default_rng(seed)
    vec = complex_gaussian(rng, n)
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (n,):
            raise DimensionMismatch(f"Mask of length {mask.shape} does not match dimension {n}")
        if not mask.any():
            raise DimensionMismatch("Mask switches off every component")
        vec = np.where(mask, vec, 0.0)
    return vec / np.linalg.norm(vec)
