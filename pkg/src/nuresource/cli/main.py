"""Main CLI entry point for nuresource."""

import click

from nuresource.version import __version__


@click.group()
@click.version_option(version=__version__, prog_name="nuresource")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    help="Log level",
)
@click.option(
    "--log-format",
    type=click.Choice(["simple", "detailed", "debug", "json"]),
    default="simple",
    help="Log line format",
)
@click.option(
    "--log-file", type=click.Path(dir_okay=False), help="Write log records to this file"
)
def cli(log_level, log_format, log_file):
    """nuresource - quantum resources of collective neutrino oscillations.

    Evolves N-neutrino flavor systems with an exact state-vector engine and
    a truncated MPS engine, and records entanglement, magic and polarization.
    """
    from nuresource.utils.logging import setup_logging

    setup_logging(level=log_level, format=log_format, log_file=log_file)


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["terminal", "json"]),
    default="terminal",
    help="Summary format on stdout",
)
@click.option("--no-color", is_flag=True, help="Disable colored output")
@click.option("--quiet", is_flag=True, help="Only print the output directory")
def run(config, output_format, no_color, quiet):
    """Run the experiment described by CONFIG."""
    from nuresource.cli.run import run_experiment

    run_experiment(config, sweep=False, output_format=output_format, no_color=no_color, quiet=quiet)


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["terminal", "json"]),
    default="terminal",
    help="Summary format on stdout",
)
@click.option("--no-color", is_flag=True, help="Disable colored output")
@click.option("--quiet", is_flag=True, help="Only print the output directory")
def sweep(config, output_format, no_color, quiet):
    """Sweep the bond-dimension caps listed in CONFIG."""
    from nuresource.cli.run import run_experiment

    run_experiment(config, sweep=True, output_format=output_format, no_color=no_color, quiet=quiet)


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--show", is_flag=True, help="Print the resolved configuration")
def validate(config, show):
    """Check CONFIG and report every invalid field."""
    from nuresource.cli.run import run_validate

    run_validate(config, show=show)


@cli.command()
@click.option("--points", type=click.IntRange(min=2), default=512, show_default=True,
              help="Number of lambda0 samples")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["csv", "json"]),
    default="csv",
    help="Table format",
)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the table to a file")
def arc(points, output_format, output):
    """Emit the single-mode (M2, S) constraint arc."""
    from nuresource.cli.run import run_arc

    run_arc(points=points, output_format=output_format, output_path=output)


@cli.command()
@click.option("--rank", "-r", type=click.Choice(["2", "4", "8"]), default="2", show_default=True,
              help="Spectrum rank")
@click.option("--samples", type=click.IntRange(min=1), default=10000, show_default=True,
              help="Number of random spectra")
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
def bounds(rank, samples, seed):
    """Check F/8 <= M2 on random spectra and count 4F > M2 cases.

    Exits with status 1 if the F/8 bound fails on any spectrum.
    """
    from nuresource.cli.run import run_bounds

    run_bounds(rank=int(rank), samples=samples, seed=seed)


if __name__ == "__main__":
    cli()
