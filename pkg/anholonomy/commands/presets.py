"""``list-presets``."""
import click

from anholonomy.floquet.presets import list_presets


@click.command("list-presets")
def list_presets_command():
    """Print the named scenarios."""
    for info in list_presets():
        seeded = " (seeded)" if info.seeded else ""
        click.echo(f"{info.name:<18} N={info.dim}{seeded}  {info.description}")
