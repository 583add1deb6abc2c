"""Static checks on a kicked family: trivial eigenvectors and bandwidth."""
import logging

import numpy as np

from anholonomy.floquet.family import KickedModel, Rank1Perturbation
from anholonomy.models.schemas import (
    BandwidthReport, TrivialEigenvector, TrivialEigenvectorReport
)
from anholonomy.numerics import UnitaryOperator, adapted_eigenbasis

logger = logging.getLogger(__name__)


def trivial_eigenvector_report(u0: UnitaryOperator, v, tol: float = 1e-8) -> TrivialEigenvectorReport:
    """List eigenvectors of U0 that the kick leaves alone.

    First kind: eigenvectors orthogonal to v, which stay eigenvectors of
    U_lam with the same eigenvalue for every lam. Degenerate eigenspaces are
    resolved in the v-adapted basis, so an eigenspace of dimension d
    contributes at least d - 1 of them. Second kind: v itself is an
    eigenvector of U0 and only picks up the phase exp(-i lam).
    """
    vec = v.v if isinstance(v, Rank1Perturbation) else np.asarray(v, dtype=complex)
    spectrum = u0.spectrum
    basis = adapted_eigenbasis(spectrum, vec)
    overlaps = np.abs(basis.conj().T @ vec)

    first_kind = [
        TrivialEigenvector(index=k, phase=float(spectrum.phases[k]), overlap=float(overlaps[k]))
        for k in range(spectrum.dim)
        if overlaps[k] <= tol
    ]
    u0v = u0.matrix @ vec
    residual = np.linalg.norm(u0v - np.vdot(vec, u0v) * vec)
    second_kind = bool(residual <= tol)
    second_index = int(np.argmax(overlaps)) if second_kind else None
    if first_kind:
        logger.info(f"Found {len(first_kind)} first-kind trivial eigenvectors")
    if second_kind:
        logger.warning("v is an eigenvector of U0; the kick only shifts its phase")
    return TrivialEigenvectorReport(
        dim=spectrum.dim,
        first_kind=first_kind,
        second_kind=second_kind,
        second_kind_index=second_index,
        overlaps=[float(x) for x in overlaps],
    )


def bandwidth_condition(model: KickedModel) -> BandwidthReport:
    """W = spread of H0; manipulation is direct when T < 2pi / W."""
    eigenvalues = model.h0.eigenvalues
    bandwidth = float(eigenvalues[-1] - eigenvalues[0])
    limit = None if bandwidth == 0.0 else 2.0 * np.pi / bandwidth
    return BandwidthReport(
        bandwidth=bandwidth,
        limit=limit,
        satisfied=bool(limit is None or model.period_t < limit),
    )
