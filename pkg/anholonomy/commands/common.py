"""Options and scenario resolution shared by the subcommands."""
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple
import logging

import click

from anholonomy.analytics.structure import ReductionResult, reduce_hilbert_space
from anholonomy.config import settings
from anholonomy.exceptions import ConfigError
from anholonomy.floquet.family import FloquetFamily, KickedModel
from anholonomy.ingestion.scenario_loader import (
    build_model, load_scenario, merge_overrides, scenario_name
)
from anholonomy.models.schemas import ScenarioConfig, TrivialEigenvectorReport

logger = logging.getLogger(__name__)


def model_options(command):
    """--preset / --config / --random / --seed / --out."""
    options = [
        click.option("--preset", default=None, help="Named scenario (see list-presets)"),
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="YAML scenario file; flags override its keys"),
        click.option("--random", "random_dim", type=int, default=None,
                     help="Random model of this dimension (needs --seed)"),
        click.option("--seed", type=int, default=None, help="Seed for random specs"),
        click.option("--out", "output_dir", default=None,
                     help="Output directory [default: ANHOLONOMY_OUTPUT_DIR or ./output]"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def resolve_scenario(config_path: Optional[str], preset: Optional[str], random_dim: Optional[int],
                     seed: Optional[int], **overrides: Any) -> Tuple[ScenarioConfig, KickedModel, str]:
    """Merge file and flags, then build the model."""
    if config_path is None and preset is None and random_dim is None:
        raise ConfigError("Give one of --preset, --config or --random")
    config = load_scenario(config_path) if config_path else None
    given: Dict[str, Any] = {"preset": preset, "seed": seed, **overrides}
    if random_dim is not None:
        given.update({"dim": random_dim, "h0_random": True, "v_random": True,
                      "name": f"random{random_dim}_seed{seed}"})
    config = merge_overrides(config, given)
    model = build_model(config)
    return config, model, scenario_name(config)


def output_directory(config: ScenarioConfig) -> Path:
    return Path(config.output_dir or settings.output_dir)


def tracked_family(model: KickedModel, name: str, trivial: Optional[TrivialEigenvectorReport],
                   issues: List[Dict]) -> Tuple[FloquetFamily, Optional[ReductionResult]]:
    """Family to sweep or evolve, plus the reduction when trivial eigenvectors exist.

    A degenerate U0 cannot be tracked level by level, so its reduced family
    is returned instead of the full one.
    """
    reduction = None
    if trivial is not None and trivial.count:
        logger.warning(f"{trivial.count} trivial eigenvectors present; reducing the Hilbert space")
        reduction = reduce_hilbert_space(model.u0, model.perturbation.v)
    if reduction is not None and any(issue["type"] == "degeneracy" for issue in issues):
        logger.warning(f"U0 is degenerate; working in the reduced space of dimension {reduction.reduced_dim}")
        return reduction.family(model.period_t, name=f"{name}-reduced"), reduction
    return model.family(), reduction
