"""``sweep``: quasienergy flow over full periods and its anholonomy certificate."""
import logging

import click

from anholonomy.analytics.certification import certify_anholonomy, winding_report
from anholonomy.analytics.spectral_flow import (
    format_permutation, integrated_delta_e, minimum_gap, sweep
)
from anholonomy.commands.common import (
    model_options, output_directory, resolve_scenario, tracked_family
)
from anholonomy.exceptions import CertificationFailure
from anholonomy.export.writers import output_path, write_flow_csv, write_report
from anholonomy.ingestion.validator import ScenarioValidator
from anholonomy.models.schemas import SweepReport

logger = logging.getLogger(__name__)


@click.command("sweep")
@model_options
@click.option("--steps", type=int, default=None, help="Grid steps per period")
@click.option("--cycles", type=int, default=None, help="Number of periods to sweep")
@click.option("--no-certify", is_flag=True, default=False, help="Skip the anholonomy certificate")
def sweep_command(preset, config_path, random_dim, seed, output_dir, steps, cycles, no_certify):
    """Track all quasienergies over lambda0 -> lambda0 + cycles * Lambda."""
    config, model, name = resolve_scenario(
        config_path, preset, random_dim, seed,
        output_dir=output_dir, steps=steps, cycles=cycles,
        certify=False if no_certify else None,
    )
    validator = ScenarioValidator()
    trivial, issues = validator.validate_model(model)
    family, reduction = tracked_family(model, name, trivial, issues)

    flow = sweep(family, lambda0=config.lambda0, steps=config.steps, cycles=max(config.cycles, 1))
    issues.extend(validator.validate_flow(flow))
    out = output_directory(config)
    write_flow_csv(flow, output_path(out, name, "flow.csv"))

    certificate = None
    certified_dim = flow.dim
    if config.certify:
        certified_flow = flow
        if reduction is not None and flow.dim != reduction.reduced_dim:
            reduced_family = reduction.family(model.period_t, name=f"{name}-reduced")
            certified_flow = sweep(reduced_family, lambda0=config.lambda0, steps=config.steps)
        certified_dim = certified_flow.dim
        certificate = certify_anholonomy(certified_flow)

    gap, gap_lambda = minimum_gap(flow)
    report = SweepReport(
        scenario=name,
        dim=flow.dim,
        certified_dim=certified_dim,
        certificate=certificate,
        winding=winding_report(flow),
        integrated_delta_e=[float(x) for x in integrated_delta_e(flow)],
        minimum_gap=gap,
        minimum_gap_lambda=gap_lambda,
        issues=issues,
    )
    write_report(report, output_path(out, name, "certificate.yaml"), header=f"sweep of {name}")

    click.echo(f"scenario: {name}")
    click.echo(f"permutation: {format_permutation(flow.permutation)}")
    click.echo("delta_e: " + " ".join(f"{d:.12f}" for d in flow.delta_e))
    if certificate is None:
        click.echo("certificate: skipped")
        return
    click.echo(f"certificate: {'PASSED' if certificate.passed else 'FAILED'}")
    if not certificate.passed:
        raise CertificationFailure(
            f"Certificate failed: {', '.join(certificate.failed_clauses)}",
            clauses=certificate.failed_clauses,
        )
