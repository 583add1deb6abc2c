"""``adiabatic``: repeated adiabatic cycles and their convergence in M."""
from typing import Tuple
import logging

import click

from anholonomy.analytics.adiabatic import anholonomic_cycle, convergence_scan, plan_cycles
from anholonomy.analytics.spectral_flow import sweep
from anholonomy.commands.common import (
    model_options, output_directory, resolve_scenario, tracked_family
)
from anholonomy.exceptions import ConfigError
from anholonomy.export.writers import output_path, write_norms_csv, write_report
from anholonomy.ingestion.validator import ScenarioValidator

logger = logging.getLogger(__name__)


@click.command("adiabatic")
@model_options
@click.option("--M", "m_values", type=int, multiple=True,
              help="Steps per cycle; repeat for a convergence table (largest drives the run)")
@click.option("--cycles", type=int, default=None, help="Number of 0 -> Lambda ramps")
@click.option("--level", "initial_level", type=int, default=None, help="Initial level n")
@click.option("--target", "target_level", type=int, default=None,
              help="Target level; the cycle count is planned from the holonomy permutation")
def adiabatic_command(preset, config_path, random_dim, seed, output_dir,
                      m_values: Tuple[int, ...], cycles, initial_level, target_level):
    """Drive an eigenstate through k cycles and report fidelity and phases."""
    config, model, name = resolve_scenario(
        config_path, preset, random_dim, seed,
        output_dir=output_dir, m_values=list(m_values) or None, cycles=cycles,
        initial_level=initial_level, target_level=target_level,
    )
    trivial, issues = ScenarioValidator().validate_model(model)
    family, _ = tracked_family(model, name, trivial, issues)
    n = config.initial_level
    if n >= family.dim:
        raise ConfigError(f"Initial level {n} outside 0..{family.dim - 1}")

    planned = None
    k = config.cycles
    if config.target_level is not None:
        flow = sweep(family, lambda0=config.lambda0, steps=config.steps)
        planned = plan_cycles(flow.permutation, n, config.target_level)
        if planned is None:
            raise ConfigError(f"Level {config.target_level} is not reachable from level {n}")
        k = planned
        logger.info(f"Planned {k} cycles from level {n} to level {config.target_level}")

    ms = sorted(config.m_values)
    m = ms[-1]
    run = anholonomic_cycle(family, m, k, initial_level=n, lambda0=config.lambda0)
    convergence = []
    if len(ms) > 1:
        convergence = convergence_scan(family, family.period_lambda, ms, initial_level=n,
                                       lambda0=config.lambda0)

    out = output_directory(config)
    write_report(run.to_report(name, convergence, planned),
                 output_path(out, name, "adiabatic.yaml"), header=f"adiabatic run of {name}")
    write_norms_csv(run, output_path(out, name, "norms.csv"))

    click.echo(f"scenario: {name}")
    click.echo(f"cycles: {k}  M: {m}  dim: {family.dim}")
    for report in run.cycle_reports:
        click.echo(f"cycle {report.cycle}: expected {report.expected_level} "
                   f"fidelity {report.fidelity:.6f} dominant {report.dominant_level}")
    click.echo(f"final level: {run.target_level}  fidelity: {run.fidelity:.6f}")
    click.echo(f"phase residual: {run.phase_residual:.3e}")
