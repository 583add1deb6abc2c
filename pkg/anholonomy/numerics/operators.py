"""Dense operator types and eigensolvers.

All operators are small (N <= 32) dense complex matrices. Value types are
immutable after construction; the expensive eigendecompositions are cached
on the instance.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple, Union
import logging

import numpy as np
from scipy import linalg

from anholonomy.config import (
    EPS_HERM_PER_DIM, EPS_UNIT_PER_DIM, TOL_DEG
)
from anholonomy.exceptions import (
    DimensionMismatch, NonFinite, NotHermitian, NotUnitary
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
PHASE_SNAP = 1e-12

ArrayLike = Union[np.ndarray, list]


def as_square_matrix(matrix: ArrayLike) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"Expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("Matrix has NaN or Inf entries")
    return m


def hermiticity_defect(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix - matrix.conj().T))


def unitarity_defect(matrix: np.ndarray) -> float:
    n = matrix.shape[0]
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(n)))


def cluster_phases(phases: np.ndarray, tol: float = TOL_DEG) -> List[List[int]]:
    """Group sorted phases in [0, 2pi) into clusters closer than ``tol``.

    Distances are measured on the circle, so a phase just below 2pi joins
    the cluster that starts at 0.
    """
    n = len(phases)
    if n == 0:
        return []
    clusters = [[0]]
    for k in range(1, n):
        if phases[k] - phases[k - 1] < tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    if len(clusters) > 1 and phases[0] + TWO_PI - phases[-1] < tol:
        clusters[0] = clusters.pop() + clusters[0]
    return clusters


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Finite-dimensional self-adjoint matrix (H0 or a general kick V)."""

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, matrix: ArrayLike) -> "HermitianOperator":
        m = as_square_matrix(matrix)
        defect = hermiticity_defect(m)
        if defect > EPS_HERM_PER_DIM * m.shape[0]:
            raise NotHermitian(f"||M - M^H||_F = {defect:.3e} exceeds tolerance")
        # store the exactly Hermitian part
        return cls(matrix=0.5 * (m + m.conj().T))

    @classmethod
    def diagonal(cls, values: ArrayLike) -> "HermitianOperator":
        return cls.from_matrix(np.diag(np.asarray(values, dtype=float)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigensystem(self) -> Tuple[np.ndarray, np.ndarray]:
        return hermitian_eigensolve(self)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigensystem[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.eigensystem[1]


@dataclass(frozen=True, eq=False)
class UnitarySpectrum:
    """Eigenpairs of a unitary, ordered by eigenphase theta = -arg z in [0, 2pi).

    Degenerate clusters are reported, not resolved: inside a cluster the
    eigenvectors are an arbitrary orthonormal basis of the eigenspace.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    phases: np.ndarray
    clusters: List[List[int]]

    @property
    def degenerate(self) -> bool:
        return any(len(c) > 1 for c in self.clusters)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class UnitaryOperator:
    """Unitary matrix (a Floquet operator)."""

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, matrix: ArrayLike) -> "UnitaryOperator":
        m = as_square_matrix(matrix)
        defect = unitarity_defect(m)
        if defect > EPS_UNIT_PER_DIM * m.shape[0]:
            raise NotUnitary(f"||U^H U - I||_F = {defect:.3e} exceeds tolerance")
        return cls(matrix=m)

    @classmethod
    def identity(cls, dim: int) -> "UnitaryOperator":
        return cls(matrix=np.eye(dim, dtype=complex))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def spectrum(self) -> UnitarySpectrum:
        return unitary_eigensolve(self)

    def adjoint(self) -> "UnitaryOperator":
        return UnitaryOperator(matrix=self.matrix.conj().T)

    def __matmul__(self, other: "UnitaryOperator") -> "UnitaryOperator":
        return UnitaryOperator(matrix=self.matrix @ other.matrix)


def hermitian_eigensolve(h: Union[HermitianOperator, ArrayLike]) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending real eigenvalues and orthonormal eigenvectors (columns)."""
    if not isinstance(h, HermitianOperator):
        h = HermitianOperator.from_matrix(h)
    eigenvalues, eigenvectors = linalg.eigh(h.matrix)
    return eigenvalues, eigenvectors


def unitary_eigensolve(u: Union[UnitaryOperator, ArrayLike],
                       tol_deg: float = TOL_DEG) -> UnitarySpectrum:
    """Eigenpairs of a unitary via the complex Schur form.

    A normal matrix has a diagonal Schur factor, so the Schur vectors are an
    orthonormal eigenbasis even inside degenerate clusters.
    """
    if not isinstance(u, UnitaryOperator):
        u = UnitaryOperator.from_matrix(u)
    schur_form, schur_vectors = linalg.schur(u.matrix, output="complex")
    z = np.diag(schur_form).copy()
    z = z / np.abs(z)
    phases = np.mod(-np.angle(z), TWO_PI)
    # phases that round up to 2pi are folded to just below zero
    phases = np.where(phases > TWO_PI - PHASE_SNAP, phases - TWO_PI, phases)
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    clusters = cluster_phases(phases, tol_deg)
    spectrum = UnitarySpectrum(
        eigenvalues=z[order],
        eigenvectors=schur_vectors[:, order],
        phases=phases,
        clusters=clusters,
    )
    if spectrum.degenerate:
        logger.debug(f"Degenerate clusters in unitary spectrum: {clusters}")
    return spectrum


def expm_hermitian(h: Union[HermitianOperator, ArrayLike], scale: float) -> UnitaryOperator:
    """exp(-i * scale * H) through the spectral decomposition of H."""
    if not isinstance(h, HermitianOperator):
        h = HermitianOperator.from_matrix(h)
    eigenvalues, eigenvectors = h.eigensystem
    phases = np.exp(-1j * scale * eigenvalues)
    return UnitaryOperator(matrix=(eigenvectors * phases) @ eigenvectors.conj().T)


def overlap_matrix(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    """Entry (i, j) is <a_i|b_j> for column sets ``a`` and ``b``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch(
            f"Column sets live in different dimensions: {a.shape[0]} vs {b.shape[0]}"
        )
    return a.conj().T @ b


def projector(vector: ArrayLike) -> np.ndarray:
    vector = np.asarray(vector, dtype=complex)
    return np.outer(vector, vector.conj())


def adapted_eigenbasis(spectrum: UnitarySpectrum, vector: ArrayLike) -> np.ndarray:
    """Eigenbasis of ``spectrum`` rotated inside each degenerate cluster.

    Within a cluster the first column is the normalised projection of
    ``vector`` onto the eigenspace and the remaining columns span its
    orthocomplement in that eigenspace, so they are exactly orthogonal to
    ``vector``. Nondegenerate columns are returned unchanged.
    """
    vector = np.asarray(vector, dtype=complex)
    basis = spectrum.eigenvectors.copy()
    for cluster in spectrum.clusters:
        if len(cluster) == 1:
            continue
        block = spectrum.eigenvectors[:, cluster]
        coeffs = block.conj().T @ vector
        norm = np.linalg.norm(coeffs)
        if norm == 0.0:
            continue
        # complete the projection to an orthonormal basis of the cluster
        seed_cols = np.column_stack([coeffs / norm, np.eye(len(cluster), dtype=complex)])
        q, _ = linalg.qr(seed_cols)
        q = q[:, :len(cluster)]
        q[:, 0] *= np.vdot(q[:, 0], coeffs / norm) / abs(np.vdot(q[:, 0], coeffs / norm))
        basis[:, cluster] = block @ q
    return basis
