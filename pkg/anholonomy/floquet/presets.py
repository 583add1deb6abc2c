"""Named scenario constructors.

Every figure-level scenario is reproducible from a preset name plus a seed.
Random presets shift H0 so that the ground quasienergy is zero at lam = 0.
"""
from typing import Callable, Dict, List, Optional, Sequence
import logging

import numpy as np

from anholonomy.exceptions import ConfigError
from anholonomy.floquet.family import KickedModel, Rank1Perturbation
from anholonomy.models.schemas import PresetInfo
from anholonomy.numerics import HermitianOperator, random_hermitian, random_state

logger = logging.getLogger(__name__)

DEFAULT_SEED = 7


def ground_shifted(h0: HermitianOperator) -> HermitianOperator:
    """H0 - e_min, so the lowest eigenvalue (and ground quasienergy) is zero."""
    shift = h0.eigenvalues[0]
    return HermitianOperator(matrix=h0.matrix - shift * np.eye(h0.dim))


def eigenbasis_vector(h0: HermitianOperator, coefficients: np.ndarray) -> np.ndarray:
    """Vector whose components in the H0 (= U0) eigenbasis are ``coefficients``."""
    vec = h0.eigenvectors @ np.asarray(coefficients, dtype=complex)
    return vec / np.linalg.norm(vec)


def twolevel_pi() -> KickedModel:
    """U0 = sigma_z (delta = pi), v = (|up> - i|down>)/sqrt(2): parallel lines, no avoided crossing."""
    v = np.array([1.0, -1.0j]) / np.sqrt(2.0)
    return KickedModel(
        h0=HermitianOperator.diagonal([0.0, np.pi]),
        perturbation=Rank1Perturbation.from_vector(v),
        period_t=1.0,
        name="twolevel-pi",
        description="Two levels, delta = pi, v = (|up> - i|down>)/sqrt(2); E0 = lam/2, E1 = pi + lam/2",
    )


def twolevel_tilted() -> KickedModel:
    """U0 = sigma_z, v = cos(pi/8)|up> + sin(pi/8)|down>: a single avoided crossing."""
    v = np.array([np.cos(np.pi / 8.0), np.sin(np.pi / 8.0)], dtype=complex)
    return KickedModel(
        h0=HermitianOperator.diagonal([0.0, np.pi]),
        perturbation=Rank1Perturbation.from_vector(v),
        period_t=1.0,
        name="twolevel-tilted",
        description="Two levels, delta = pi, v = cos(pi/8)|up> + sin(pi/8)|down>; one avoided crossing",
    )


def random_model(dim: int, seed: int, mask: Optional[Sequence[bool]] = None,
                 period_t: float = 1.0, name: str = "random") -> KickedModel:
    """GUE H0 (ground shifted to zero) with a random v, optionally masked in the H0 eigenbasis."""
    h0 = ground_shifted(random_hermitian(dim, seed))
    coefficients = random_state(dim, seed + 1, mask=mask)
    v = eigenbasis_vector(h0, coefficients)
    return KickedModel(
        h0=h0,
        perturbation=Rank1Perturbation.from_vector(v),
        period_t=period_t,
        name=name,
        description=f"Random N={dim} model, seed {seed}",
        metadata={"seed": seed, "mask": None if mask is None else [int(m) for m in mask]},
    )


def random_cyclic(dim: int = 5, seed: int = DEFAULT_SEED) -> KickedModel:
    """Random N-level model whose v is cyclic for U0 (all levels join the anholonomy)."""
    return random_model(dim, seed, name="random-cyclic")


def broken_mask(dim: int, active: int, seed: int) -> List[bool]:
    """Seeded choice of ``active`` nonzero components out of ``dim``."""
    rng = np.random.default_rng(seed + 2)
    chosen = set(rng.permutation(dim)[:active].tolist())
    return [k in chosen for k in range(dim)]


def random_broken(dim: int = 5, seed: int = DEFAULT_SEED, active: int = 3) -> KickedModel:
    """Random N-level model with only ``active`` components of v (broken cyclicity)."""
    if not 1 <= active <= dim:
        raise ConfigError(f"Active component count {active} outside 1..{dim}")
    return random_model(dim, seed, mask=broken_mask(dim, active, seed), name="random-broken")


PRESETS: Dict[str, Callable[..., KickedModel]] = {
    "twolevel-pi": twolevel_pi,
    "twolevel-tilted": twolevel_tilted,
    "random-cyclic": random_cyclic,
    "random-broken": random_broken,
}

SEEDED_PRESETS = {"random-cyclic", "random-broken"}


def build_preset(name: str, seed: Optional[int] = None, dim: Optional[int] = None) -> KickedModel:
    """Instantiate a preset by name; ``seed`` and ``dim`` only apply to random presets."""
    if name not in PRESETS:
        raise ConfigError(f"Unknown preset: {name}. Available: {sorted(PRESETS)}")
    constructor = PRESETS[name]
    if name in SEEDED_PRESETS:
        kwargs = {"seed": DEFAULT_SEED if seed is None else seed}
        if dim is not None:
            kwargs["dim"] = dim
        logger.info(f"Building preset {name} with {kwargs}")
        return constructor(**kwargs)
    return constructor()


def list_presets() -> List[PresetInfo]:
    infos = []
    for name in PRESETS:
        model = build_preset(name)
        infos.append(PresetInfo(
            name=name,
            description=model.description,
            dim=model.dim,
            seeded=name in SEEDED_PRESETS,
        ))
    return infos
