"""Pydantic schemas for reports and scenario configuration."""
from pydantic import BaseModel, Field, field_validator, model_validator
from typing import List, Optional, Union

from anholonomy.config import settings


# Structure reports
class DegeneracyCluster(BaseModel):
    """Eigenphases closer than the degeneracy tolerance."""
    indices: List[int]
    phase: float
    size: int


class TrivialEigenvector(BaseModel):
    """Eigenvector of U0 that the kick does not move."""
    index: int
    phase: float
    overlap: float


class TrivialEigenvectorReport(BaseModel):
    """First-kind (orthogonal to v) and second-kind (v itself) trivial eigenvectors."""
    dim: int
    first_kind: List[TrivialEigenvector] = []
    second_kind: bool = False
    second_kind_index: Optional[int] = None
    overlaps: List[float] = []

    @property
    def count(self) -> int:
        return len(self.first_kind)


class BandwidthReport(BaseModel):
    """Spread W of H0 against the 2pi/T quasienergy cell."""
    bandwidth: float
    limit: Optional[float] = None
    satisfied: bool


class CyclicityReport(BaseModel):
    """Three equivalent cyclicity diagnostics for (U, v)."""
    is_cyclic: bool
    overlaps: List[float]
    krylov_rank: int
    singular_values: List[float]
    vandermonde_abs: float
    degenerate: bool
    clusters: List[DegeneracyCluster] = []
    overlap_criterion: bool
    krylov_criterion: bool
    vandermonde_criterion: bool

    @property
    def routes_agree(self) -> bool:
        return self.overlap_criterion == self.krylov_criterion == self.vandermonde_criterion


class TrivialBlock(BaseModel):
    """Kick-invariant part of one eigenspace of U0."""
    phase: float
    dimension: int


class ReductionSummary(BaseModel):
    """Serializable view of a Hilbert-space reduction."""
    original_dim: int
    reduced_dim: int
    trivial_blocks: List[TrivialBlock] = []
    reduced_phases: List[float] = []
    reduced_overlaps: List[float] = []


# Spectral flow reports
class ClauseResult(BaseModel):
    """One clause of an anholonomy certificate."""
    clause: str
    description: str
    passed: bool
    residual: float


class AnholonomyCertificate(BaseModel):
    """Verification of quantization, bound, sum rule and projector holonomy."""
    dim: int
    period_t: float
    period_lambda: float
    permutation: List[int]
    permutation_cycles: str
    delta_e: List[float]
    sum_delta_e: float
    expected_sum: float
    clauses: List[ClauseResult]
    passed: bool
    has_anholonomy: bool

    @property
    def failed_clauses(self) -> List[str]:
        return [c.clause for c in self.clauses if not c.passed]


class WindingReport(BaseModel):
    """Quantum-number increment and per-track winding across the quasienergy cell."""
    shift: Optional[int] = None
    active_levels: List[int] = []
    windings: List[int]
    cycle_lengths: List[int]
    fractional: List[float]


class SweepReport(BaseModel):
    """Everything ``sweep`` emits besides the flow CSV."""
    scenario: str
    dim: int
    certified_dim: int
    certificate: Optional[AnholonomyCertificate] = None
    winding: WindingReport
    integrated_delta_e: List[float] = []
    minimum_gap: float
    minimum_gap_lambda: float
    issues: List[dict] = []


# Adiabatic reports
class PhaseDecomposition(BaseModel):
    """Final-state phase split into dynamical and geometric parts."""
    total: float
    dynamical: float
    geometric: float
    residual: float
    closed: bool


class CycleReport(BaseModel):
    """State after one completed 0 -> 2pi ramp."""
    cycle: int
    expected_level: int
    fidelity: float
    dominant_level: int
    dominant_overlap: float


class ConvergenceRow(BaseModel):
    """Infidelity at one step count."""
    m: int
    infidelity: float


class ScheduleSummary(BaseModel):
    lambda0: float
    span: float
    m: int
    profile: str
    max_step: float


class RunReport(BaseModel):
    """Everything ``adiabatic`` emits for one scenario."""
    scenario: str
    schedule: ScheduleSummary
    initial_level: int
    target_level: int
    fidelity: float
    leakage: float
    phases: Optional[PhaseDecomposition] = None
    cycles: List[CycleReport] = []
    convergence: List[ConvergenceRow] = []
    planned_cycles: Optional[int] = None


class AnalysisReport(BaseModel):
    """Everything ``analyze`` emits for one scenario."""
    scenario: str
    dim: int
    clusters: List[DegeneracyCluster]
    cyclicity: CyclicityReport
    trivial: Optional[TrivialEigenvectorReport] = None
    reduction: Optional[ReductionSummary] = None
    bandwidth: Optional[BandwidthReport] = None
    issues: List[dict] = []


# Scenario configuration
class ScenarioConfig(BaseModel):
    """Flat scenario description; exactly one H0 spec and one v spec is used."""
    name: str = "scenario"
    preset: Optional[str] = None
    dim: Optional[int] = Field(None, ge=1, le=32)
    seed: Optional[int] = None

    # H0: diagonal list | explicit matrix | seeded random
    h0_diagonal: Optional[List[float]] = None
    h0_matrix: Optional[List[List[Union[float, str]]]] = None
    h0_random: bool = False

    # v: explicit | seeded random | masked random (mask in the H0 eigenbasis)
    v: Optional[List[Union[float, str]]] = None
    v_random: bool = False
    v_mask: Optional[List[int]] = None

    period_t: float = Field(1.0, gt=0)
    lambda0: float = 0.0
    steps: int = Field(default_factory=lambda: settings.default_steps, ge=1)
    cycles: int = Field(1, ge=0)
    m_values: List[int] = Field(default_factory=lambda: [settings.default_m])
    initial_level: int = Field(0, ge=0)
    target_level: Optional[int] = Field(None, ge=0)
    output_dir: Optional[str] = None
    certify: bool = True

    @field_validator("m_values")
    @classmethod
    def check_m_values(cls, values: List[int]) -> List[int]:
        if any(m < 0 for m in values):
            raise ValueError("Step counts M must be non-negative")
        return values

    @field_validator("v_mask")
    @classmethod
    def check_mask(cls, mask: Optional[List[int]]) -> Optional[List[int]]:
        if mask is not None and not any(mask):
            raise ValueError("v_mask switches off every component")
        return mask

    @model_validator(mode="after")
    def check_sources(self) -> "ScenarioConfig":
        if self.preset is not None:
            return self
        h0_specs = sum([self.h0_diagonal is not None, self.h0_matrix is not None, self.h0_random])
        if h0_specs != 1:
            raise ValueError("Exactly one of h0_diagonal, h0_matrix, h0_random is required")
        v_specs = sum([self.v is not None, self.v_random or self.v_mask is not None])
        if v_specs != 1:
            raise ValueError("Exactly one of v, v_random/v_mask is required")
        random_used = self.h0_random or self.v_random or self.v_mask is not None
        if random_used and self.seed is None:
            raise ValueError("seed is mandatory for random specs")
        if self.h0_random and self.dim is None:
            raise ValueError("dim is required for a random H0")
        return self


class PresetInfo(BaseModel):
    name: str
    description: str
    dim: int
    seeded: bool
