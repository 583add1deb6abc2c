"""Parametrised Floquet-operator families of kicked systems.

A kicked system H(t) = H0 + lam * V * sum_n delta(t - nT) is represented by
its stroboscopic map U_lam = exp(-i H0 T) exp(-i lam V). For a rank-1 kick
V = |v><v| the second factor is evaluated in closed form,
1 - (1 - exp(-i lam)) V, so the 2pi period in lam holds structurally.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union
import logging

import numpy as np

from anholonomy.config import EPS_ORTH
from anholonomy.exceptions import DimensionMismatch, NotNormalized
from anholonomy.floquet.period import family_period
from anholonomy.numerics import (
    HermitianOperator, UnitaryOperator, expm_hermitian, projector
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True, eq=False)
class Rank1Perturbation:
    """Projector kick V = |v><v| with a normalised v."""

    v: np.ndarray

    @classmethod
    def from_vector(cls, v, normalize: bool = False) -> "Rank1Perturbation":
        vec = np.asarray(v, dtype=complex).ravel()
        norm = np.linalg.norm(vec)
        if normalize:
            if norm == 0.0:
                raise NotNormalized("Cannot normalise the zero vector")
            vec = vec / norm
        elif abs(norm - 1.0) > EPS_ORTH:
            raise NotNormalized(f"||v|| = {norm:.12f}, expected 1")
        return cls(v=vec)

    @property
    def dim(self) -> int:
        return self.v.shape[0]

    @cached_property
    def projector(self) -> np.ndarray:
        return projector(self.v)

    @cached_property
    def operator(self) -> HermitianOperator:
        return HermitianOperator(matrix=self.projector)


Perturbation = Union[Rank1Perturbation, HermitianOperator]


def _kick_matrix(perturbation: Perturbation) -> np.ndarray:
    if isinstance(perturbation, Rank1Perturbation):
        return perturbation.projector
    return perturbation.matrix


def rank1_floquet(u0: UnitaryOperator, v, lam: float) -> UnitaryOperator:
    """U0 (1 - (1 - e^{-i lam}) |v><v|), never through a matrix exponential."""
    kick = v if isinstance(v, Rank1Perturbation) else Rank1Perturbation.from_vector(v)
    if kick.dim != u0.dim:
        raise DimensionMismatch(f"v has dimension {kick.dim}, U0 has {u0.dim}")
    c = 1.0 - np.exp(-1j * lam)
    u0v = u0.matrix @ kick.v
    return UnitaryOperator(matrix=u0.matrix - c * np.outer(u0v, kick.v.conj()))


@dataclass(frozen=True, eq=False)
class FloquetFamily:
    """lam -> U_lam with kick period ``period_t`` (T) and parameter period Lambda.

    For a rank-1 kick Lambda is always 2pi. For a general Hermitian kick it
    is whatever the caller declares (see ``family_period``) or ``None``.
    """

    u0: UnitaryOperator
    perturbation: Perturbation
    period_t: float = 1.0
    period_lambda: Optional[float] = None
    name: str = ""

    def __post_init__(self):
        if not self.period_t > 0:
            raise ValueError(f"Kick period T must be positive, got {self.period_t}")
        dim = self.perturbation.dim
        if dim != self.u0.dim:
            raise DimensionMismatch(f"Perturbation has dimension {dim}, U0 has {self.u0.dim}")
        if self.is_rank1:
            object.__setattr__(self, "period_lambda", TWO_PI)
        elif self.period_lambda is not None and not self.period_lambda > 0:
            raise ValueError(f"Parameter period must be positive, got {self.period_lambda}")

    @property
    def dim(self) -> int:
        return self.u0.dim

    @property
    def is_rank1(self) -> bool:
        return isinstance(self.perturbation, Rank1Perturbation)

    @property
    def kick_matrix(self) -> np.ndarray:
        return _kick_matrix(self.perturbation)

    @property
    def kick_trace(self) -> float:
        return float(np.real(np.trace(self.kick_matrix)))

    def evaluate(self, lam: float) -> UnitaryOperator:
        """U_lam."""
        if self.is_rank1:
            return rank1_floquet(self.u0, self.perturbation, lam)
        return self.u0 @ expm_hermitian(self.perturbation, lam)

    def apply(self, lam: float, psi: np.ndarray) -> np.ndarray:
        """U_lam |psi> without forming U_lam for rank-1 kicks."""
        if self.is_rank1:
            v = self.perturbation.v
            c = 1.0 - np.exp(-1j * lam)
            return self.u0.matrix @ (psi - c * np.vdot(v, psi) * v)
        return self.evaluate(lam).matrix @ psi


@dataclass(frozen=True, eq=False)
class KickedModel:
    """H0, kick V and kick period T; the Floquet family is derived from them."""

    h0: HermitianOperator
    perturbation: Perturbation
    period_t: float = 1.0
    name: str = ""
    description: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.period_t > 0:
            raise ValueError(f"Kick period T must be positive, got {self.period_t}")
        if self.perturbation.dim != self.h0.dim:
            raise DimensionMismatch(
                f"Perturbation has dimension {self.perturbation.dim}, H0 has {self.h0.dim}"
            )

    @property
    def dim(self) -> int:
        return self.h0.dim

    @cached_property
    def u0(self) -> UnitaryOperator:
        return expm_hermitian(self.h0, self.period_t)

    def family(self, period_lambda: Optional[float] = None) -> FloquetFamily:
        """FloquetFamily of this model; a general kick gets its period from ``family_period``."""
        if period_lambda is None and not isinstance(self.perturbation, Rank1Perturbation):
            period_lambda = family_period(self.perturbation)
            logger.info(f"Period of general kick for {self.name or 'model'}: {period_lambda}")
        return FloquetFamily(
            u0=self.u0,
            perturbation=self.perturbation,
            period_t=self.period_t,
            period_lambda=period_lambda,
            name=self.name,
        )


def kicked_floquet(model: KickedModel, lam: float) -> UnitaryOperator:
    """exp(-i H0 T) exp(-i lam V); rank-1 kicks use the closed form."""
    if isinstance(model.perturbation, Rank1Perturbation):
        return rank1_floquet(model.u0, model.perturbation, lam)
    return model.u0 @ expm_hermitian(model.perturbation, lam)
