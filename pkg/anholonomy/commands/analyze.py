"""``analyze``: degeneracy, cyclicity and reduction of (U0, v)."""
import logging

import click

from anholonomy.analytics.structure import degeneracy_report, is_cyclic, reduce_hilbert_space
from anholonomy.commands.common import model_options, output_directory, resolve_scenario
from anholonomy.exceptions import VIsEigenvector
from anholonomy.export.writers import output_path, write_report
from anholonomy.floquet.analysis import bandwidth_condition
from anholonomy.ingestion.validator import ScenarioValidator
from anholonomy.models.schemas import AnalysisReport

logger = logging.getLogger(__name__)


@click.command("analyze")
@model_options
def analyze_command(preset, config_path, random_dim, seed, output_dir):
    """Report whether v is cyclic for U0 and what the reduction removes."""
    config, model, name = resolve_scenario(config_path, preset, random_dim, seed, output_dir=output_dir)
    u0 = model.u0
    v = model.perturbation.v
    trivial, issues = ScenarioValidator().validate_model(model)
    cyclicity = is_cyclic(u0, v)

    reduction = None
    try:
        reduction = reduce_hilbert_space(u0, v).to_summary()
    except VIsEigenvector as e:
        logger.warning(str(e))

    report = AnalysisReport(
        scenario=name,
        dim=model.dim,
        clusters=degeneracy_report(u0),
        cyclicity=cyclicity,
        trivial=trivial,
        reduction=reduction,
        bandwidth=bandwidth_condition(model),
        issues=issues,
    )
    write_report(report, output_path(output_directory(config), name, "analysis.yaml"),
                 header=f"structure of {name}")

    degenerate = [c.indices for c in report.clusters if c.size > 1]
    click.echo(f"scenario: {name}")
    click.echo(f"cyclic: {cyclicity.is_cyclic}  krylov_rank: {cyclicity.krylov_rank}/{model.dim}")
    click.echo(f"degenerate clusters: {degenerate if degenerate else 'none'}")
    if reduction is not None:
        click.echo(f"reduced dimension: {reduction.reduced_dim}")
    else:
        click.echo("reduced dimension: n/a (v is an eigenvector of U0)")
