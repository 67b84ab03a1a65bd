"""Command implementations for the nuresource CLI."""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import click

from nuresource.core.exceptions import (
    EXIT_VALIDATION,
    CapacityError,
    ConfigurationError,
    NuResourceError,
)


@contextmanager
def reported_errors():
    """Echo package errors to stderr and exit with their code."""
    try:
        yield
    except ConfigurationError as e:
        click.echo(f"Error: {e.message}", err=True)
        for error in e.errors:
            click.echo(f"  - {error}", err=True)
        sys.exit(e.exit_code)
    except CapacityError as e:
        click.echo(f"Error: {e.message} (requested {e.requested}, limit {e.limit})", err=True)
        if e.advice:
            click.echo(f"  advice: {e.advice}", err=True)
        sys.exit(e.exit_code)
    except NuResourceError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(e.exit_code)
    except FileNotFoundError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_VALIDATION)


def run_experiment(
    config_path: str,
    sweep: bool,
    output_format: str = "terminal",
    no_color: bool = False,
    quiet: bool = False,
) -> None:
    """Run the run or sweep command."""
    from nuresource.core.config import RunConfig
    from nuresource.core.runner import ExperimentRunner
    from nuresource.formatters import get_formatter

    with reported_errors():
        config = RunConfig.from_file(config_path)
        runner = ExperimentRunner(config)
        result = runner.sweep() if sweep else runner.run()

    if quiet:
        click.echo(str(result.output_dir))
        return
    formatter = get_formatter(output_format, color=not no_color)
    click.echo(formatter.format(result), nl=False)


def run_validate(config_path: str, show: bool = False) -> None:
    """Run the validate command."""
    from nuresource.core.config import RunConfig

    with reported_errors():
        config = RunConfig.from_file(config_path)

    click.echo(
        f"Valid: N={config.n_sites}, engine={config.engine.value}, "
        f"measures={','.join(m.value for m in config.measures)}, "
        f"hash={config.config_hash()[:12]}"
    )
    if show:
        click.echo(config.to_yaml(), nl=False)


def run_arc(points: int, output_format: str = "csv", output_path: Optional[str] = None) -> None:
    """Run the arc command."""
    from nuresource.core.runner import ARC_COLUMNS
    from nuresource.formatters import get_formatter
    from nuresource.resources import sample_arc

    with reported_errors():
        formatter = get_formatter(output_format)
        text = formatter.format_table(ARC_COLUMNS, sample_arc(points).tolist())

    if output_path:
        Path(output_path).write_text(text, encoding="utf-8", newline="\n")
        click.echo(f"Output written to {output_path}")
    else:
        click.echo(text, nl=False)


def run_bounds(rank: int, samples: int, seed: int = 0) -> None:
    """Run the bounds command."""
    import numpy as np

    from nuresource.resources import random_spectra, tally_bounds

    with reported_errors():
        tally = tally_bounds(random_spectra(rank, samples, np.random.default_rng(seed)))

    click.echo(f"r={rank} spectra={tally.samples} seed={seed}")
    click.echo(f"  F/8 <= M2 violations: {tally.lower_violations}")
    click.echo(f"  4F <= M2 violations:  {tally.tight_violations}")
    if tally.lower_violations:
        sys.exit(1)
