"""Kicked Floquet families, their period and scenario presets."""
from anholonomy.floquet.family import (
    FloquetFamily,
    KickedModel,
    Rank1Perturbation,
    kicked_floquet,
    rank1_floquet,
)
from anholonomy.floquet.period import family_period
from anholonomy.floquet.analysis import bandwidth_condition, trivial_eigenvector_report
from anholonomy.floquet.presets import build_preset, list_presets, random_model

__all__ = [
    "FloquetFamily",
    "KickedModel",
    "Rank1Perturbation",
    "bandwidth_condition",
    "build_preset",
    "family_period",
    "kicked_floquet",
    "list_presets",
    "random_model",
    "rank1_floquet",
    "trivial_eigenvector_report",
]
