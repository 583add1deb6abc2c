"""Anholonomy certificate, geometric phase and winding of a completed sweep."""
from typing import List, Optional
import logging

import numpy as np

from anholonomy.analytics.spectral_flow import (
    SpectralFlow, format_permutation, wrap_symmetric
)
from anholonomy.config import settings
from anholonomy.exceptions import CertificationFailure, GridMismatch, OpenTrack
from anholonomy.models.schemas import AnholonomyCertificate, ClauseResult, WindingReport
from anholonomy.numerics import projector

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


def _require_periodic(flow: SpectralFlow) -> np.ndarray:
    if flow.permutation is None:
        raise GridMismatch("Operation needs a sweep over a full period")
    return flow.permutation


def certify_anholonomy(flow: SpectralFlow, tol: Optional[float] = None,
                       strict: bool = False) -> AnholonomyCertificate:
    """Check quantization, bound, sum rule and projector holonomy of the first period.

    With ``strict`` a failing certificate raises ``CertificationFailure``;
    otherwise the failing clauses are reported in the certificate.
    """
    permutation = _require_periodic(flow)
    tol = settings.tol_cert if tol is None else tol
    cell = TWO_PI / flow.period_t
    start_energies = flow.start.quasienergies
    delta_e = flow.delta_e
    end = flow.period_indices[1]

    quantization = float(np.max(np.abs(
        wrap_symmetric(delta_e - (start_energies[permutation] - start_energies), cell)
    )))
    margin = float(np.min(np.minimum(delta_e, cell - delta_e)))
    expected_sum = flow.period_lambda * flow.kick_trace / flow.period_t
    sum_residual = abs(float(np.sum(delta_e)) - expected_sum)
    projector_residual = max(
        float(np.linalg.norm(
            projector(flow.vector(end, n)) - projector(flow.start.eigenvectors[:, permutation[n]])
        ))
        for n in range(flow.dim)
    )

    clauses = [
        ClauseResult(
            clause="quantization",
            description="Delta E_n = E_pi(n)(lam0) - E_n(lam0) mod 2pi/T",
            passed=quantization <= tol,
            residual=quantization,
        ),
        ClauseResult(
            clause="bound",
            description="0 < Delta E_n < 2pi/T (residual is the smallest margin)",
            passed=margin > tol,
            residual=margin,
        ),
        ClauseResult(
            clause="sum_rule",
            description="sum_n Delta E_n = Lambda tr(V) / T",
            passed=sum_residual <= tol,
            residual=sum_residual,
        ),
        ClauseResult(
            clause="projector",
            description="|xi_n(lam0+Lambda)><xi_n| = |xi_pi(n)(lam0)><xi_pi(n)| (Frobenius)",
            passed=projector_residual <= tol,
            residual=projector_residual,
        ),
    ]
    passed = all(c.passed for c in clauses)
    certificate = AnholonomyCertificate(
        dim=flow.dim,
        period_t=flow.period_t,
        period_lambda=flow.period_lambda,
        permutation=[int(p) for p in permutation],
        permutation_cycles=format_permutation(permutation),
        delta_e=[float(d) for d in delta_e],
        sum_delta_e=float(np.sum(delta_e)),
        expected_sum=float(expected_sum),
        clauses=clauses,
        passed=passed,
        has_anholonomy=passed and bool(np.any(permutation != np.arange(flow.dim))),
    )
    if passed:
        logger.info(f"Certificate passed: permutation {certificate.permutation_cycles}")
    else:
        logger.warning(f"Certificate failed clauses: {certificate.failed_clauses}")
        if strict:
            raise CertificationFailure(
                f"Anholonomy certificate failed: {', '.join(certificate.failed_clauses)}",
                clauses=certificate.failed_clauses,
            )
    return certificate


def orbit(permutation: np.ndarray, n: int) -> List[int]:
    """Levels visited by track n: n, pi(n), pi(pi(n)), ..."""
    levels = [int(n)]
    nxt = int(permutation[n])
    while nxt != n:
        levels.append(nxt)
        nxt = int(permutation[nxt])
    return levels


def transport_phase(flow: SpectralFlow, n: int, first: int, last: int) -> float:
    """-arg of the product of step overlaps of track n between two grid indices."""
    vectors = flow.eigenvectors[first:last + 1, :, n]
    overlaps = np.einsum("ji,ji->j", vectors[:-1].conj(), vectors[1:])
    return float(-np.sum(np.angle(overlaps)))


def geometric_phase(flow: SpectralFlow, n: int, cycles: Optional[int] = None) -> float:
    """Discrete Pancharatnam phase of track n, closed on its start vector.

    ``cycles`` defaults to the orbit length of n. The product of overlaps is
    invariant under rephasing of the stored vectors, so the result does not
    depend on the continuation gauge. Returned in [-pi, pi).
    """
    permutation = _require_periodic(flow)
    if cycles is None:
        cycles = len(orbit(permutation, n))
    if cycles > flow.cycles:
        raise GridMismatch(f"Flow covers {flow.cycles} cycles, {cycles} requested")
    if int(flow.permutation_power(cycles)[n]) != n:
        raise OpenTrack(f"Track {n} does not close after {cycles} cycles")
    last = flow.period_indices[cycles]
    accumulated = transport_phase(flow, n, 0, last)
    closing = np.vdot(flow.vector(last, n), flow.vector(0, n))
    return float(wrap_symmetric(accumulated - np.angle(closing), TWO_PI))


def _permutation_shift(permutation: np.ndarray, active: List[int]) -> Optional[int]:
    size = len(active)
    if size == 0:
        return 0
    position = {level: k for k, level in enumerate(active)}
    shifts = {(position[int(permutation[level])] - k) % size for k, level in enumerate(active)}
    return shifts.pop() if len(shifts) == 1 else None


def winding_report(flow: SpectralFlow) -> WindingReport:
    """Quantum-number increment on the moving levels and winding of each track's orbit.

    The winding of track n counts how often its concatenated curve crosses
    the 2pi/T cell before it closes on itself.
    """
    permutation = _require_periodic(flow)
    fractional = flow.delta_e * flow.period_t / TWO_PI
    active = [n for n in range(flow.dim) if int(permutation[n]) != n]
    windings = []
    lengths = []
    for n in range(flow.dim):
        levels = orbit(permutation, n)
        lengths.append(len(levels))
        windings.append(int(np.rint(np.sum(fractional[levels]))))
    shift = _permutation_shift(permutation, active)
    if shift is None:
        logger.warning("Permutation is not a uniform shift on the moving levels")
    return WindingReport(
        shift=shift,
        active_levels=active,
        windings=windings,
        cycle_lengths=lengths,
        fractional=[float(f) for f in fractional],
    )
