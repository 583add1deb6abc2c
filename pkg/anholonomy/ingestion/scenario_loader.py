"""Scenario files: YAML -> ScenarioConfig -> KickedModel."""
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import logging

import numpy as np
import yaml
from pydantic import ValidationError

from anholonomy.exceptions import ConfigError, NumericalError
from anholonomy.floquet.family import KickedModel, Rank1Perturbation
from anholonomy.floquet.presets import (
    build_preset, eigenbasis_vector, ground_shifted
)
from anholonomy.models.schemas import ScenarioConfig
from anholonomy.numerics import HermitianOperator, random_hermitian, random_state

logger = logging.getLogger(__name__)

ALIASES_PATH = Path(__file__).parent.parent.parent / "config" / "scenario_aliases.yaml"


def load_key_aliases() -> Dict[str, List[str]]:
    """Load accepted key spellings from YAML."""
    with open(ALIASES_PATH, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)["scenario"]


def find_key(keys: List[str], possible_names: List[str]) -> Optional[str]:
    """Find the key in ``keys`` that matches any of the possible names (case-insensitive)."""
    for name in possible_names:
        name_lower = name.lower().strip()
        for key in keys:
            if str(key).lower().strip() == name_lower:
                return key
    return None


def map_keys(raw: Dict[str, Any]) -> Dict[str, Any]:
    """Rename scenario keys to canonical field names; unknown keys are a config error."""
    aliases = load_key_aliases()
    mapped: Dict[str, Any] = {}
    used = set()
    for canonical, possible_names in aliases.items():
        found = find_key(list(raw), possible_names)
        if found is not None:
            mapped[canonical] = raw[found]
            used.add(found)
    unknown = [k for k in raw if k not in used]
    if unknown:
        raise ConfigError(f"Unknown scenario keys: {unknown}")
    return mapped


def parse_complex(value: Union[int, float, str]) -> complex:
    """Number or string such as ``"0.5-0.5j"`` / ``"1 - 2i"``."""
    if isinstance(value, (int, float)):
        return complex(value)
    text = str(value).replace(" ", "").replace("i", "j")
    try:
        return complex(text)
    except ValueError:
        raise ConfigError(f"Cannot parse complex number: {value!r}")


def scenario_from_dict(raw: Dict[str, Any]) -> ScenarioConfig:
    try:
        return ScenarioConfig(**map_keys(raw))
    except ValidationError as e:
        raise ConfigError(f"Invalid scenario: {e}")


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Parse a flat YAML scenario file."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Scenario file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Cannot parse {path}: {e}")
    if not isinstance(raw, dict):
        raise ConfigError(f"{path} must hold a key-value mapping")
    config = scenario_from_dict(raw)
    logger.info(f"Loaded scenario {config.name} from {path}")
    return config


def merge_overrides(config: Optional[ScenarioConfig], overrides: Dict[str, Any]) -> ScenarioConfig:
    """Apply command-line values (None means 'not given') on top of a file config."""
    base = config.model_dump(exclude_unset=True) if config is not None else {}
    given = {k: v for k, v in overrides.items() if v is not None}
    if "preset" in given or "h0_random" in given:
        # a preset or --random replaces any model spec from the file
        for key in ("preset", "h0_diagonal", "h0_matrix", "h0_random", "v", "v_random", "v_mask"):
            base.pop(key, None)
    try:
        return ScenarioConfig(**{**base, **given})
    except ValidationError as e:
        raise ConfigError(f"Invalid scenario: {e}")


def _build_h0(config: ScenarioConfig) -> HermitianOperator:
    if config.h0_diagonal is not None:
        return HermitianOperator.diagonal(config.h0_diagonal)
    if config.h0_matrix is not None:
        matrix = np.array([[parse_complex(x) for x in row] for row in config.h0_matrix])
        return HermitianOperator.from_matrix(matrix)
    return ground_shifted(random_hermitian(config.dim, config.seed))


def _build_v(config: ScenarioConfig, h0: HermitianOperator) -> np.ndarray:
    if config.v is not None:
        vec = np.array([parse_complex(x) for x in config.v])
        if vec.shape[0] != h0.dim:
            raise ConfigError(f"v has {vec.shape[0]} components, H0 has dimension {h0.dim}")
        return vec
    mask = None
    if config.v_mask is not None:
        if len(config.v_mask) != h0.dim:
            raise ConfigError(f"v_mask has {len(config.v_mask)} entries, H0 has dimension {h0.dim}")
        mask = [bool(m) for m in config.v_mask]
    return eigenbasis_vector(h0, random_state(h0.dim, config.seed + 1, mask=mask))


def build_model(config: ScenarioConfig) -> KickedModel:
    """KickedModel described by ``config``; explicit v is normalised."""
    if config.preset is not None:
        model = build_preset(config.preset, seed=config.seed, dim=config.dim)
        return model
    try:
        h0 = _build_h0(config)
        if config.dim is not None and config.dim != h0.dim:
            raise ConfigError(f"dim = {config.dim} but H0 has dimension {h0.dim}")
        vec = _build_v(config, h0)
        perturbation = Rank1Perturbation.from_vector(vec, normalize=True)
    except NumericalError as e:
        raise ConfigError(f"Scenario {config.name} does not define a valid model: {e}")
    return KickedModel(
        h0=h0,
        perturbation=perturbation,
        period_t=config.period_t,
        name=config.name,
        description=f"Scenario {config.name}",
        metadata={"seed": config.seed},
    )


def scenario_name(config: ScenarioConfig) -> str:
    """File stem for outputs: preset name unless the scenario is named."""
    if config.preset is not None and config.name == "scenario":
        return config.preset
    return config.name
