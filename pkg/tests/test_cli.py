"""Tests for the command-line interface."""

import json
import logging

import pytest
from click.testing import CliRunner

from nuresource.cli.main import cli
from nuresource.version import __version__


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop the handler the CLI binds to the runner's stderr."""
    yield
    package_logger = logging.getLogger("nuresource")
    package_logger.handlers.clear()
    package_logger.propagate = True


class TestCli:
    """Tests for the command group."""

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output

    def test_help_lists_commands(self, runner):
        result = runner.invoke(cli, ["--help"])
        assert result.exit_code == 0
        for command in ("run", "sweep", "validate", "arc", "bounds"):
            assert command in result.output


class TestValidateCommand:
    """Tests for the validate command."""

    def test_valid(self, runner, write_config, tiny_config_text):
        result = runner.invoke(cli, ["validate", str(write_config(tiny_config_text))])
        assert result.exit_code == 0
        assert result.stdout.startswith("Valid: N=4, engine=both")

    def test_show_resolved(self, runner, write_config, tiny_config_text):
        result = runner.invoke(cli, ["validate", "--show", str(write_config(tiny_config_text))])
        assert result.exit_code == 0
        assert "system.n_sites: 4" in result.stdout

    def test_invalid_lists_every_field(self, runner, write_config):
        path = write_config("system.initial_config: mmee\nevolution.dt: 0\nengine: fast\n")
        result = runner.invoke(cli, ["validate", str(path)])
        assert result.exit_code == 2
        assert "evolution.dt" in result.stderr
        assert "engine" in result.stderr

    def test_capacity(self, runner, write_config):
        path = write_config("system.initial_config: " + "e" * 16)
        result = runner.invoke(cli, ["validate", str(path)])
        assert result.exit_code == 3
        assert "limit 14" in result.stderr
        assert "engine=mps" in result.stderr

    def test_unsupported_extension(self, runner, write_config):
        path = write_config("system.initial_config: me", name="run.ini")
        result = runner.invoke(cli, ["validate", str(path)])
        assert result.exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["validate", str(tmp_path / "absent.yaml")])
        assert result.exit_code == 2


class TestArcCommand:
    """Tests for the arc command."""

    def test_csv_to_stdout(self, runner):
        result = runner.invoke(cli, ["arc", "--points", "3"])
        assert result.exit_code == 0
        lines = result.stdout.strip().split("\n")
        assert lines[0] == "lambda0,M2NL,S"
        assert len(lines) == 4
        assert lines[1].startswith("5.0000000000000000e-01,")

    def test_json(self, runner):
        result = runner.invoke(cli, ["arc", "--points", "2", "--format", "json"])
        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert [row["lambda0"] for row in rows] == [0.5, 1.0]

    def test_write_file(self, runner, tmp_path):
        target = tmp_path / "arc.csv"
        result = runner.invoke(cli, ["arc", "--points", "5", "-o", str(target)])
        assert result.exit_code == 0
        assert len(target.read_text(encoding="utf-8").splitlines()) == 6

    def test_too_few_points(self, runner):
        result = runner.invoke(cli, ["arc", "--points", "1"])
        assert result.exit_code == 2


class TestBoundsCommand:
    """Tests for the bounds command."""

    def test_counts(self, runner):
        result = runner.invoke(cli, ["bounds", "-r", "4", "--samples", "200", "--seed", "3"])
        assert result.exit_code == 0
        assert result.stdout.startswith("r=4 spectra=200 seed=3")
        assert "F/8 <= M2 violations: 0" in result.stdout
        assert "4F <= M2 violations:" in result.stdout

    def test_log_file_receives_tally(self, runner, tmp_path):
        log_file = tmp_path / "bounds.log"
        result = runner.invoke(
            cli,
            ["--log-level", "INFO", "--log-file", str(log_file), "bounds", "--samples", "50"],
        )
        assert result.exit_code == 0
        logging.getLogger("nuresource").handlers[0].flush()
        assert "Bound chain over 50 spectra" in log_file.read_text(encoding="utf-8")

    def test_rank_choices(self, runner):
        assert runner.invoke(cli, ["bounds", "-r", "3"]).exit_code == 2


class TestRunCommand:
    """Tests for the run and sweep commands."""

    def test_quiet_prints_directory(self, runner, write_config, tiny_config_text, tmp_path):
        result = runner.invoke(cli, ["run", "--quiet", str(write_config(tiny_config_text))])
        assert result.exit_code == 0
        out = result.stdout.strip()
        assert out.startswith(str(tmp_path / "results" / "tiny-"))

    def test_terminal_summary(self, runner, write_config, tiny_config_text):
        result = runner.invoke(cli, ["run", "--no-color", str(write_config(tiny_config_text))])
        assert result.exit_code == 0
        assert "exact: asymptotic values" in result.stdout
        assert "mps-chi4: asymptotic values" in result.stdout

    def test_json_summary(self, runner, write_config, tiny_config_text):
        result = runner.invoke(cli, ["run", "--format", "json", str(write_config(tiny_config_text))])
        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert [e["label"] for e in data["engines"]] == ["exact", "mps-chi4"]

    def test_invalid_config_exit_code(self, runner, write_config):
        path = write_config("system.initial_config: mmee\ncoupling.mu0: -1\n")
        result = runner.invoke(cli, ["run", str(path)])
        assert result.exit_code == 2
        assert "coupling.mu0" in result.stderr

    def test_sweep_needs_caps(self, runner, write_config, tiny_config_text):
        result = runner.invoke(cli, ["sweep", str(write_config(tiny_config_text))])
        assert result.exit_code == 2
        assert "at least 2 caps" in result.stderr
