"""Stroboscopic adiabatic evolution and the cyclic state-manipulation protocol.

The state is advanced by U_{lam_1}, ..., U_{lam_M} applied in order to an
eigenvector at lam_0. Phases follow the convention

    Psi_f ~ exp(-i * dynamical) * exp(+i * geometric) * xi_target

with dynamical = sum_j E_n(lam_j) T along the tracked level.
"""
from dataclasses import dataclass, field
from math import gcd
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from anholonomy.analytics.certification import transport_phase
from anholonomy.analytics.spectral_flow import SpectralFlow, sweep, wrap_symmetric
from anholonomy.config import settings
from anholonomy.exceptions import GridMismatch
from anholonomy.floquet.family import FloquetFamily
from anholonomy.models.schemas import (
    ConvergenceRow, CycleReport, PhaseDecomposition, RunReport, ScheduleSummary
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
PROFILES = ("linear",)
PERIOD_MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class Schedule:
    """lam_j = lambda0 + span * j / m for j = 1..m; the initial state sits at lambda0."""

    lambda0: float
    span: float
    m: int
    profile: str = "linear"

    def __post_init__(self):
        if self.m < 0:
            raise GridMismatch(f"Step count must be non-negative, got {self.m}")
        if self.span < 0:
            raise GridMismatch(f"Span must be non-negative (lam increases along the ramp), got {self.span}")
        if self.profile not in PROFILES:
            raise GridMismatch(f"Unknown ramp profile {self.profile}; expected one of {PROFILES}")

    @property
    def lambdas(self) -> np.ndarray:
        if self.m == 0:
            return np.empty(0)
        return self.lambda0 + self.span * np.arange(1, self.m + 1) / self.m

    @property
    def final_lambda(self) -> float:
        return self.lambda0 + self.span

    @property
    def step_constant(self) -> float:
        """C in max_j |lam_{j+1} - lam_j| <= C / m."""
        return abs(self.span)

    @property
    def max_step(self) -> float:
        return self.step_constant / self.m if self.m else 0.0

    def to_summary(self) -> ScheduleSummary:
        return ScheduleSummary(
            lambda0=self.lambda0, span=self.span, m=self.m,
            profile=self.profile, max_step=self.max_step,
        )


@dataclass(frozen=True, eq=False)
class AdiabaticRun:
    schedule: Schedule
    initial_level: int
    target_level: int
    initial_state: np.ndarray
    final_state: np.ndarray
    fidelity: float
    phases: PhaseDecomposition
    norms: np.ndarray
    cycle_reports: List[CycleReport] = field(default_factory=list)

    @property
    def dynamical_phase(self) -> float:
        return self.phases.dynamical

    @property
    def geometric_phase(self) -> float:
        return self.phases.geometric

    @property
    def phase_residual(self) -> float:
        return self.phases.residual

    @property
    def leakage(self) -> float:
        """Population outside the target level."""
        return max(0.0, 1.0 - self.fidelity ** 2)

    def to_report(self, scenario: str, convergence: Sequence[ConvergenceRow] = (),
                  planned_cycles: Optional[int] = None) -> RunReport:
        return RunReport(
            scenario=scenario,
            schedule=self.schedule.to_summary(),
            initial_level=self.initial_level,
            target_level=self.target_level,
            fidelity=self.fidelity,
            leakage=self.leakage,
            phases=self.phases,
            cycles=self.cycle_reports,
            convergence=list(convergence),
            planned_cycles=planned_cycles,
        )


def _propagate(family: FloquetFamily, lambdas: np.ndarray,
               psi: np.ndarray) -> Tuple[np.ndarray, List[float]]:
    norms = []
    for lam in lambdas:
        psi = family.apply(lam, psi)
        norms.append(float(np.linalg.norm(psi)))
    return psi, norms


def _periods_in_span(family: FloquetFamily, span: float) -> Optional[int]:
    """Number of whole periods in ``span``, or None when the span is open."""
    if family.period_lambda is None:
        return None
    k = int(round(span / family.period_lambda))
    if k < 1 or abs(span - k * family.period_lambda) > PERIOD_MATCH_RTOL * abs(span):
        return None
    return k


def flow_for_schedule(family: FloquetFamily, schedule: Schedule,
                      steps: Optional[int] = None) -> SpectralFlow:
    """A sweep whose grid contains every schedule point.

    Whole-period spans reuse the periodic sweep over the needed cycles;
    other spans get an open sweep.
    """
    base = settings.default_steps if steps is None else steps
    if schedule.m == 0:
        if family.period_lambda is not None:
            return sweep(family, lambda0=schedule.lambda0, steps=base, cycles=1)
        return sweep(family, lambda0=schedule.lambda0, steps=1, span=0.0)
    m = schedule.m
    k = _periods_in_span(family, schedule.span)
    if k is not None:
        stride = m // gcd(m, k)
        per_cycle = stride * max(1, -(-base // stride))
        return sweep(family, lambda0=schedule.lambda0, steps=per_cycle, cycles=k)
    total = m * max(1, -(-base // m))
    return sweep(family, lambda0=schedule.lambda0, steps=total, span=schedule.span)


def _target(flow: SpectralFlow, n: int, last: int) -> Tuple[int, np.ndarray, bool]:
    """Target level and vector at grid index ``last``."""
    if flow.is_periodic and last in flow.period_indices:
        k = flow.period_indices.index(last)
        level = int(flow.permutation_power(k)[n])
        return level, flow.start.eigenvectors[:, level], level == n
    return n, flow.vector(last, n), False


def phase_decompose(run: AdiabaticRun, flow: SpectralFlow) -> PhaseDecomposition:
    """Split arg<xi_target|Psi_f> into dynamical and geometric parts along the tracked level."""
    return _decompose(run.schedule, run.initial_level, run.final_state, flow)[2]


def _decompose(schedule: Schedule, n: int, final_state: np.ndarray,
               flow: SpectralFlow) -> Tuple[int, float, PhaseDecomposition]:
    if abs(flow.lambda0 - schedule.lambda0) > 1e-12 * max(1.0, abs(schedule.lambda0)):
        raise GridMismatch(f"Flow starts at {flow.lambda0}, schedule at {schedule.lambda0}")
    indices = [flow.index_of(lam) for lam in schedule.lambdas]
    last = indices[-1] if indices else 0
    level, target, closed = _target(flow, n, last)

    dynamical = float(np.mod(np.sum(flow.quasienergies[indices, n]) * flow.period_t, TWO_PI))
    geometric = transport_phase(flow, n, 0, last) - float(np.angle(np.vdot(flow.vector(last, n), target)))
    geometric = float(wrap_symmetric(geometric, TWO_PI))
    amplitude = np.vdot(target, final_state)
    total = float(np.angle(amplitude))
    residual = float(wrap_symmetric(total + dynamical - geometric, TWO_PI))
    return level, float(abs(amplitude)), PhaseDecomposition(
        total=total, dynamical=dynamical, geometric=geometric,
        residual=residual, closed=closed,
    )


def adiabatic_evolve(family: FloquetFamily, schedule: Schedule, initial_level: int,
                     flow: Optional[SpectralFlow] = None) -> AdiabaticRun:
    """Evolve xi_n(lambda0) through the schedule and compare with the tracked level.

    The target is xi_{pi^k(n)}(lambda0) when the schedule spans k whole
    periods, otherwise the continued eigenvector xi_n(lambda_f).
    """
    if flow is None:
        flow = flow_for_schedule(family, schedule)
    if not 0 <= initial_level < flow.dim:
        raise GridMismatch(f"Level {initial_level} outside 0..{flow.dim - 1}")
    psi0 = flow.start.eigenvectors[:, initial_level]
    final, norms = _propagate(family, schedule.lambdas, psi0)
    level, fidelity, phases = _decompose(schedule, initial_level, final, flow)
    logger.info(f"Adiabatic run M={schedule.m}: level {initial_level} -> {level}, fidelity {fidelity:.8f}")
    return AdiabaticRun(
        schedule=schedule,
        initial_level=initial_level,
        target_level=level,
        initial_state=psi0,
        final_state=final,
        fidelity=fidelity,
        phases=phases,
        norms=np.array([1.0] + norms),
    )


def convergence_scan(family: FloquetFamily, span: float, ms: Sequence[int],
                     initial_level: int = 0, lambda0: float = 0.0) -> List[ConvergenceRow]:
    """Infidelity 1 - |<xi_target|Psi_f>| for each step count."""
    if list(ms) != sorted(ms):
        raise GridMismatch(f"Step counts must be ascending, got {list(ms)}")
    rows = []
    for m in ms:
        run = adiabatic_evolve(family, Schedule(lambda0=lambda0, span=span, m=m), initial_level)
        rows.append(ConvergenceRow(m=m, infidelity=max(0.0, 1.0 - run.fidelity)))
        logger.debug(f"M={m}: infidelity {rows[-1].infidelity:.3e}")
    return rows


def anholonomic_cycle(family: FloquetFamily, m: int, k: int, initial_level: int = 0,
                      lambda0: float = 0.0, flow: Optional[SpectralFlow] = None) -> AdiabaticRun:
    """Repeat the lambda0 -> lambda0 + Lambda ramp k times, resetting lambda after each cycle.

    After cycle c the state is compared with xi_{pi^c(n)}(lambda0).
    """
    if family.period_lambda is None:
        raise GridMismatch("Cyclic manipulation needs a periodic family")
    period = family.period_lambda
    if k == 0 or m == 0:
        return adiabatic_evolve(family, Schedule(lambda0=lambda0, span=0.0, m=0), initial_level, flow=flow)
    total = Schedule(lambda0=lambda0, span=k * period, m=k * m)
    if flow is None:
        flow = flow_for_schedule(family, total)

    one_cycle = Schedule(lambda0=lambda0, span=period, m=m).lambdas
    start = flow.start.eigenvectors
    psi = start[:, initial_level]
    norms = [1.0]
    reports = []
    for cycle in range(1, k + 1):
        psi, cycle_norms = _propagate(family, one_cycle, psi)
        norms.extend(cycle_norms)
        expected = int(flow.permutation_power(cycle)[initial_level])
        weights = np.abs(start.conj().T @ psi)
        dominant = int(np.argmax(weights))
        reports.append(CycleReport(
            cycle=cycle,
            expected_level=expected,
            fidelity=float(weights[expected]),
            dominant_level=dominant,
            dominant_overlap=float(weights[dominant]),
        ))
        logger.info(f"Cycle {cycle}: expected level {expected}, dominant {dominant} "
                    f"({weights[dominant]:.6f})")

    level, fidelity, phases = _decompose(total, initial_level, psi, flow)
    return AdiabaticRun(
        schedule=total,
        initial_level=initial_level,
        target_level=level,
        initial_state=start[:, initial_level],
        final_state=psi,
        fidelity=fidelity,
        phases=phases,
        norms=np.array(norms),
        cycle_reports=reports,
    )


def plan_cycles(permutation: Sequence[int], initial_level: int, target_level: int) -> Optional[int]:
    """Smallest k >= 0 with pi^k(initial) = target, None if target is off the orbit."""
    level = int(initial_level)
    for k in range(len(permutation)):
        if level == target_level:
            return k
        level = int(permutation[level])
    return None


def sudden_switch_off(family: FloquetFamily, state: np.ndarray, steps: int) -> np.ndarray:
    """|<xi_m|psi>| under bare U0 for the level m that dominates ``state``.

    Entry 0 is the overlap before any step.
    """
    eigenvectors = family.u0.spectrum.eigenvectors
    dominant = int(np.argmax(np.abs(eigenvectors.conj().T @ state)))
    xi = eigenvectors[:, dominant]
    trace = [abs(np.vdot(xi, state))]
    psi = np.asarray(state, dtype=complex)
    for _ in range(steps):
        psi = family.u0.matrix @ psi
        trace.append(abs(np.vdot(xi, psi)))
    return np.array(trace)


def norm_trace(run: AdiabaticRun) -> np.ndarray:
    """||Psi_j|| for j = 0..M."""
    return run.norms
