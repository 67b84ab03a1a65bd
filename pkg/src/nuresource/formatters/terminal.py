"""Terminal formatter for nuresource."""

import io
import math

from rich.console import Console
from rich.table import Table

from nuresource.core.result import EngineResult, RunResult
from nuresource.formatters.base import Formatter


def _num(value: float, spec: str = ".4f") -> str:
    return "-" if value is None or math.isnan(value) else format(value, spec)


class TerminalFormatter(Formatter):
    """Rich tables of asymptotic values, splits and colocation."""

    def __init__(self, color: bool = True, width: int = 110, **kwargs):
        self.color = color
        self.width = width

    def format(self, result: RunResult) -> str:
        """Render the run summary as text."""
        buffer = io.StringIO()
        console = Console(
            file=buffer,
            width=self.width,
            force_terminal=self.color,
            no_color=not self.color,
            highlight=False,
        )
        manifest = result.manifest
        console.print(
            f"[bold]{manifest.run_name}[/bold]  id={manifest.run_id}  "
            f"hash={manifest.config_hash[:12]}  wall={manifest.wall_time:.2f}s"
        )
        for engine in result.engines:
            console.print(self._asymptotic_table(engine))
            self._print_structure(console, engine)
        if result.diffs:
            console.print(self._diff_table(result))
        for warning in manifest.warnings:
            console.print(f"[yellow]warning:[/yellow] {warning}")
        console.print(f"Output written to {result.output_dir}")
        return buffer.getvalue()

    def _asymptotic_table(self, engine: EngineResult) -> Table:
        table = Table(title=f"{engine.label}: asymptotic values", title_justify="left")
        for name in ("mode", "omega", "S", "M2NL", "4F", "Pz", "Pnu1", "region", "stationary"):
            table.add_column(name, justify="right")
        for row in engine.asymptotic:
            table.add_row(
                str(row.mode),
                _num(row.omega, ".3g"),
                _num(row.entropy),
                _num(row.nl_sre2),
                _num(row.antiflatness4),
                _num(row.pz),
                _num(row.p_nu1),
                row.region or "-",
                "yes" if row.stationary else "[red]no[/red]",
            )
        return table

    def _print_structure(self, console: Console, engine: EngineResult) -> None:
        if engine.splits is not None:
            if engine.splits.boundaries:
                parts = [
                    f"{b.lower_mode}<->{b.upper_mode} {b.strength.value} ({b.delta:.3f})"
                    for b in engine.splits.boundaries
                ]
                console.print("Splits: " + ", ".join(parts))
            else:
                console.print("Splits: none")
        for row in engine.colocation:
            mark = "[green]colocated[/green]" if row.colocated else "[red]not colocated[/red]"
            console.print(
                f"  split {row.boundary.lower_mode}<->{row.boundary.upper_mode} at mode {row.mode}: {mark}"
            )
        if engine.symmetry is not None:
            console.print(
                f"Mirror pairs: max |dS|={engine.symmetry.entropy_delta:.2e}, "
                f"max |dM2|={engine.symmetry.magic_delta:.2e}"
            )

    def _diff_table(self, result: RunResult) -> Table:
        table = Table(title="Bond-cap differences", title_justify="left")
        for name in ("mode", "caps", "dS", "dM2NL", "region", "tandem"):
            table.add_column(name, justify="right")
        for row in result.diffs:
            tandem = "-" if row.tandem is None else ("yes" if row.tandem else "no")
            table.add_row(
                str(row.mode),
                f"{row.cap_from}->{row.cap_to}",
                _num(row.delta_entropy, ".2e"),
                _num(row.delta_nl_sre2, ".2e"),
                row.region,
                tandem,
            )
        return table
