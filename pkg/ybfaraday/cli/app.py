"""Command-line application: parser wiring, logging setup and exit-status mapping."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from pydantic import ValidationError

from ybfaraday import __version__
from ybfaraday.cli import commands
from ybfaraday.config import get_settings

logger = logging.getLogger(__name__)


def _add_noise_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--noise", type=float, default=0.0, help="Gaussian noise, fraction of the series peak"
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed of the noise generator")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ybfaraday",
        description="Faraday rotation of ytterbium: spectra, pumping, traces and fits",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="Print transition constants and the isotope table")
    p.set_defaults(handler=commands.cmd_constants)

    p = sub.add_parser("strengths", help="Print exact transition-strength tables")
    p.add_argument("--spin", default="1/2", help="Nuclear spin I, e.g. 1/2 or 5/2")
    p.add_argument("--pol", default="sigma+", choices=["sigma+", "sigma-", "pi"])
    p.add_argument(
        "--coefficients", action="store_true", help="Print the I=5/2 stretched-state coefficients"
    )
    p.set_defaults(handler=commands.cmd_strengths)

    p = sub.add_parser("spectrum", help="Beam absorption and rotation spectra (CSV)")
    p.add_argument("--scenario", default=None, help="Beam scenario JSON (defaults if omitted)")
    p.add_argument("--out", default=None, help="Output CSV (stdout if omitted)")
    p.add_argument("--from", dest="start", type=float, default=-1500.0, help="MHz from 174Yb")
    p.add_argument("--to", dest="stop", type=float, default=2500.0, help="MHz from 174Yb")
    p.add_argument("--step", type=float, default=2.0, help="MHz")
    _add_noise_options(p)
    p.set_defaults(handler=commands.cmd_spectrum)

    p = sub.add_parser("rotation", help="Rotation spectrum of one isotope (CSV)")
    p.add_argument("--isotope", type=int, default=171, help="Mass number")
    p.add_argument("--p", type=float, default=1.0, help="Polarization in [-1, 1]")
    p.add_argument("--nsigma", type=float, default=1.0, help="N*sigma0*L")
    p.add_argument("--from", dest="start", type=float, default=-1000.0, help="MHz from 174Yb")
    p.add_argument("--to", dest="stop", type=float, default=2000.0, help="MHz from 174Yb")
    p.add_argument("--step", type=float, default=1.0, help="MHz")
    p.add_argument("--width", type=float, default=None, help="Linewidth in MHz (natural if omitted)")
    p.add_argument("--split", type=float, default=0.0, help="Excited Zeeman split in MHz (I=0)")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=commands.cmd_rotation)

    p = sub.add_parser("pump", help="Optical pumping trajectory (CSV)")
    who = p.add_mutually_exclusive_group()
    who.add_argument("--spin", default="1/2", help="Nuclear spin; picks the first isotope with it")
    who.add_argument("--isotope", type=int, default=None, help="Mass number")
    p.add_argument("--pol", default="sigma+", choices=["sigma+", "sigma-"])
    p.add_argument("--intensity", type=float, default=0.01, help="mW/mm^2")
    p.add_argument("--detuning", type=float, default=0.0, help="MHz from the F'=I line")
    p.add_argument("--duration", type=float, default=20.0, help="us")
    p.add_argument("--step", type=float, default=None, help="Integrator step in us")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=commands.cmd_pump)

    p = sub.add_parser("release", help="MOT release trace (CSV)")
    p.add_argument("--scenario", default=None, help="MOT scenario JSON")
    p.add_argument("--from", dest="start", type=float, default=0.0, help="ms")
    p.add_argument("--to", dest="stop", type=float, default=10.0, help="ms")
    p.add_argument("--step", type=float, default=0.05, help="ms")
    p.add_argument("--out", default=None)
    _add_noise_options(p)
    p.set_defaults(handler=commands.cmd_release)

    p = sub.add_parser("precess", help="FORT Larmor precession trace (CSV)")
    p.add_argument("--scenario", default=None, help="FORT scenario JSON")
    p.add_argument("--B", type=float, default=None, help="Magnetic field in uT")
    p.add_argument("--p", type=float, default=1.0, help="Polarization scaling the amplitude")
    p.add_argument("--amplitude", type=float, default=None, help="Amplitude in rad (overrides --p)")
    p.add_argument("--decay", type=float, default=3.0, help="Decay time in ms")
    p.add_argument("--phase", type=float, default=0.0, help="rad")
    p.add_argument("--to", dest="stop", type=float, default=8.0, help="Last hold time in ms")
    p.add_argument("--points", type=int, default=800)
    p.add_argument("--out", default=None)
    _add_noise_options(p)
    p.set_defaults(handler=commands.cmd_precess)

    p = sub.add_parser("estimates", help="Scalar estimates of a scenario")
    p.add_argument("--scenario", default=None, help="Scenario JSON with a 'kind' field")
    p.add_argument("--kind", default=None, choices=["beam", "mot", "fort"])
    p.add_argument("--out", default=None, help="Output JSON")
    p.set_defaults(handler=commands.cmd_estimates)

    p = sub.add_parser("fit", help="Fit a CSV series")
    p.add_argument("model", choices=sorted(commands.FIT_COLUMNS))
    p.add_argument("--data", required=True, help="Input CSV")
    p.add_argument("--out", default=None, help="Output JSON")
    p.add_argument("--x", default=None, help="Abscissa column")
    p.add_argument("--y", default=None, help="Ordinate column")
    p.add_argument(
        "--free", type=int, nargs="*", default=[171, 173], help="Isotopes with free columns"
    )
    p.add_argument("--fixed-frequency", action="store_true", help="Keep omega_B at its initial value")
    p.set_defaults(handler=commands.cmd_fit)

    p = sub.add_parser("report", help="HTML report of the quoted anchors")
    p.add_argument("--out", default="reports/anchors.html", help="Output HTML file path")
    p.set_defaults(handler=commands.cmd_report)

    return ap


def configure_logging() -> None:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv`` and dispatch; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        # --help and --version exit with 0
        return commands.EXIT_OK if e.code in (0, None) else commands.EXIT_USAGE

    try:
        configure_logging()
    except ValidationError as e:
        print(f"error: invalid settings: {e}", file=sys.stderr)
        return commands.EXIT_VALIDATION

    try:
        return args.handler(args)
    except (ValidationError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return commands.EXIT_VALIDATION


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)
