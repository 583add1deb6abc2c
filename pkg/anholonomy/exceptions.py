"""Exception hierarchy shared by the library and the CLI."""
from typing import List, Optional


class AnholonomyError(Exception):
    """Base error. ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class ConfigError(AnholonomyError):
    """Unparseable or inconsistent scenario configuration."""

    exit_code = 2


class CertificationFailure(AnholonomyError):
    """An anholonomy certificate has at least one failing clause."""

    exit_code = 3

    def __init__(self, message: str, clauses: Optional[List[str]] = None):
        super().__init__(message)
        self.clauses = clauses or []


class NumericalError(AnholonomyError):
    """Numerical precondition violated (degeneracy, tracking, shape...)."""

    exit_code = 4


class NotHermitian(NumericalError):
    pass


class NotUnitary(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class DimensionMismatch(NumericalError):
    pass


class NotNormalized(NumericalError):
    pass


class DegenerateSpectrum(NumericalError):
    """Raised with the offending clusters (lists of level indices)."""

    def __init__(self, message: str, clusters: Optional[List[List[int]]] = None):
        super().__init__(message)
        self.clusters = clusters or []


class TrackingAmbiguity(NumericalError):
    """Best step-to-step overlap fell below the match floor."""

    def __init__(self, message: str, lam: float = float("nan"),
                 best_overlap: float = float("nan")):
        super().__init__(message)
        self.lam = lam
        self.best_overlap = best_overlap


class OpenTrack(NumericalError):
    pass


class GridMismatch(NumericalError):
    pass


class VIsEigenvector(NumericalError):
    pass


class EmptyReduction(NumericalError):
    pass
