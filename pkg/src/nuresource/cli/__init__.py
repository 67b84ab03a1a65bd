"""Command-line interface for nuresource."""

from nuresource.cli.main import cli

__all__ = ["cli"]
