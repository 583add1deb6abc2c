"""Hilbert-space reduction and cyclicity diagnostics for a pair (U0, v)."""
from dataclasses import dataclass
from typing import List, Optional
import logging

import numpy as np
from scipy import linalg

from anholonomy.config import KRYLOV_RTOL, TOL_DEG
from anholonomy.exceptions import EmptyReduction, VIsEigenvector
from anholonomy.floquet.family import FloquetFamily, Rank1Perturbation
from anholonomy.models.schemas import (
    CyclicityReport, DegeneracyCluster, ReductionSummary, TrivialBlock
)
from anholonomy.numerics import (
    UnitaryOperator, adapted_eigenbasis, unitary_eigensolve
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8


def degeneracy_report(u: UnitaryOperator, tol: float = TOL_DEG) -> List[DegeneracyCluster]:
    """Eigenphase clusters of U; U is nondegenerate iff every cluster is a singleton."""
    spectrum = unitary_eigensolve(u, tol_deg=tol)
    return [
        DegeneracyCluster(
            indices=[int(k) for k in cluster],
            phase=float(spectrum.phases[cluster[0]]),
            size=len(cluster),
        )
        for cluster in spectrum.clusters
    ]


@dataclass(frozen=True, eq=False)
class ReductionResult:
    """(U0, v) restricted to the span of the v-projections onto each eigenspace.

    ``embedding`` has orthonormal columns; column k is the reduced basis
    vector k written in the original space. ``trivial_basis`` spans the
    kick-invariant complement.
    """

    reduced_u0: UnitaryOperator
    reduced_v: np.ndarray
    embedding: np.ndarray
    trivial_blocks: List[TrivialBlock]
    trivial_basis: np.ndarray
    original_dim: int

    @property
    def reduced_dim(self) -> int:
        return self.embedding.shape[1]

    @property
    def is_identity(self) -> bool:
        return self.reduced_dim == self.original_dim

    def lift(self, state: np.ndarray) -> np.ndarray:
        return self.embedding @ state

    def restrict(self, state: np.ndarray) -> np.ndarray:
        return self.embedding.conj().T @ state

    def family(self, period_t: float = 1.0, name: str = "") -> FloquetFamily:
        return FloquetFamily(
            u0=self.reduced_u0,
            perturbation=Rank1Perturbation.from_vector(self.reduced_v, normalize=True),
            period_t=period_t,
            name=name,
        )

    def to_summary(self) -> ReductionSummary:
        spectrum = self.reduced_u0.spectrum
        return ReductionSummary(
            original_dim=self.original_dim,
            reduced_dim=self.reduced_dim,
            trivial_blocks=self.trivial_blocks,
            reduced_phases=[float(p) for p in spectrum.phases],
            reduced_overlaps=[
                float(abs(np.vdot(spectrum.eigenvectors[:, k], self.reduced_v)))
                for k in range(self.reduced_dim)
            ],
        )


def reduce_hilbert_space(u0: UnitaryOperator, v: np.ndarray,
                         tol: float = DEFAULT_TOL) -> ReductionResult:
    """Split every eigenspace H_z of U0 into the v-projection and its orthocomplement.

    The orthocomplements are invariant under every U_lam and are dropped;
    what remains carries a nondegenerate U0 for which v is cyclic.
    """
    v = np.asarray(v, dtype=complex)
    spectrum = u0.spectrum
    basis = adapted_eigenbasis(spectrum, v)
    overlaps = np.abs(basis.conj().T @ v)

    active: List[int] = []
    trivial: List[int] = []
    trivial_blocks: List[TrivialBlock] = []
    for cluster in spectrum.clusters:
        lead, rest = cluster[0], cluster[1:]
        if overlaps[lead] > tol:
            active.append(lead)
            dropped = list(rest)
        else:
            dropped = list(cluster)
        trivial.extend(dropped)
        if dropped:
            trivial_blocks.append(TrivialBlock(
                phase=float(spectrum.phases[lead]), dimension=len(dropped)
            ))

    if not active:
        raise EmptyReduction("v has no component in any eigenspace of U0")
    if len(active) == 1 and spectrum.dim > 1:
        raise VIsEigenvector("v lies in a single eigenspace of U0; the kick only shifts one level")

    embedding = basis[:, active]
    restricted = embedding.conj().T @ u0.matrix @ embedding
    reduced_v = embedding.conj().T @ v
    norm = np.linalg.norm(reduced_v)
    if abs(norm - 1.0) > tol:
        logger.warning(f"Projection of v lost weight {1.0 - norm:.3e} in reduction")
    reduced_v = reduced_v / norm

    if trivial:
        logger.info(f"Reduced dimension {spectrum.dim} -> {len(active)}; "
                    f"trivial blocks {[(round(b.phase, 6), b.dimension) for b in trivial_blocks]}")
    return ReductionResult(
        reduced_u0=UnitaryOperator(matrix=restricted),
        reduced_v=reduced_v,
        embedding=embedding,
        trivial_blocks=trivial_blocks,
        trivial_basis=basis[:, trivial],
        original_dim=spectrum.dim,
    )


def krylov_matrix(u: UnitaryOperator, v: np.ndarray) -> np.ndarray:
    columns = [np.asarray(v, dtype=complex)]
    for _ in range(u.dim - 1):
        columns.append(u.matrix @ columns[-1])
    return np.column_stack(columns)


def vandermonde_abs(eigenvalues: np.ndarray) -> float:
    """prod_{i<j} |z_j - z_i|."""
    differences = eigenvalues[None, :] - eigenvalues[:, None]
    upper = np.triu_indices(len(eigenvalues), k=1)
    return float(np.prod(np.abs(differences[upper])))


def is_cyclic(u: UnitaryOperator, v: np.ndarray, tol: float = DEFAULT_TOL,
              rank_rtol: Optional[float] = None) -> CyclicityReport:
    """Decide whether v generates the whole space under U, three ways.

    The overlap route uses the v-adapted eigenbasis so that a degenerate
    eigenspace always exposes a direction orthogonal to v.
    """
    v = np.asarray(v, dtype=complex)
    rank_rtol = KRYLOV_RTOL if rank_rtol is None else rank_rtol
    spectrum = u.spectrum

    overlaps = np.abs(adapted_eigenbasis(spectrum, v).conj().T @ v)
    raw_overlaps = np.abs(spectrum.eigenvectors.conj().T @ v)
    singular_values = linalg.svdvals(krylov_matrix(u, v))
    rank = int(np.sum(singular_values > rank_rtol * singular_values[0])) if singular_values[0] > 0 else 0
    vandermonde = vandermonde_abs(spectrum.eigenvalues)

    overlap_criterion = bool(np.all(overlaps > tol))
    krylov_criterion = rank == spectrum.dim
    vandermonde_criterion = (not spectrum.degenerate) and vandermonde > 0.0 and bool(np.all(raw_overlaps > tol))

    report = CyclicityReport(
        is_cyclic=krylov_criterion,
        overlaps=[float(o) for o in overlaps],
        krylov_rank=rank,
        singular_values=[float(s) for s in singular_values],
        vandermonde_abs=vandermonde,
        degenerate=spectrum.degenerate,
        clusters=[
            DegeneracyCluster(indices=list(c), phase=float(spectrum.phases[c[0]]), size=len(c))
            for c in spectrum.clusters if len(c) > 1
        ],
        overlap_criterion=overlap_criterion,
        krylov_criterion=krylov_criterion,
        vandermonde_criterion=vandermonde_criterion,
    )
    if not report.routes_agree:
        logger.warning(
            f"Cyclicity routes disagree: overlap={overlap_criterion}, "
            f"krylov={krylov_criterion}, vandermonde={vandermonde_criterion}"
        )
    return report
