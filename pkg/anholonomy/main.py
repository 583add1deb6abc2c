"""Command-line entry point."""
import logging
import sys

import click

from anholonomy.config import settings
from anholonomy.exceptions import AnholonomyError

logger = logging.getLogger(__name__)


class AnholonomyGroup(click.Group):
    """Maps library errors to the documented exit codes."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except AnholonomyError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(e.exit_code)


@click.group(cls=AnholonomyGroup)
@click.version_option(settings.app_version, prog_name=settings.app_name)
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              help="Overrides ANHOLONOMY_LOG_LEVEL")
def cli(log_level):
    """Quasienergy and eigenspace anholonomy of rank-1 kicked systems."""
    level = (log_level or settings.log_level).upper()
    logging.basicConfig(
        stream=sys.stderr,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    logging.getLogger().setLevel(level)


# Register subcommands
from anholonomy.commands.sweep import sweep_command
from anholonomy.commands.adiabatic import adiabatic_command
from anholonomy.commands.analyze import analyze_command
from anholonomy.commands.presets import list_presets_command

cli.add_command(sweep_command)
cli.add_command(adiabatic_command)
cli.add_command(analyze_command)
cli.add_command(list_presets_command)


if __name__ == "__main__":
    cli()
