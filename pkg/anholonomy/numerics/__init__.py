"""Dense complex linear-algebra substrate."""
from anholonomy.numerics.operators import (
    HermitianOperator,
    UnitaryOperator,
    UnitarySpectrum,
    adapted_eigenbasis,
    expm_hermitian,
    hermitian_eigensolve,
    overlap_matrix,
    projector,
    unitary_eigensolve,
)
from anholonomy.numerics.random_matrices import (
    haar_random_unitary,
    random_hermitian,
    random_state,
)

__all__ = [
    "adapted_eigenbasis",
    "HermitianOperator",
    "UnitaryOperator",
    "UnitarySpectrum",
    "expm_hermitian",
    "haar_random_unitary",
    "hermitian_eigensolve",
    "overlap_matrix",
    "projector",
    "random_hermitian",
    "random_state",
    "unitary_eigensolve",
]
