"""Command-line surface of the toolkit."""

from ybfaraday.cli.app import build_parser, run

__all__ = ["build_parser", "run"]
