"""CLI entry point for nuresource.

Allows running as: python -m nuresource
"""

from nuresource.cli.main import cli

if __name__ == "__main__":
    cli()
