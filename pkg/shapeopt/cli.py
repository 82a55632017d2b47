"""Command-line interface: argument parsing, exit-code mapping and artifact writing."""

import argparse
from collections.abc import Sequence
import logging
from pathlib import Path
import sys

from pydantic import ValidationError

from shapeopt import __version__
from shapeopt.core.config import get_settings
from shapeopt.core.errors import EXIT_OK, EXIT_PRECONDITION, ConfigError, ShapeOptError
from shapeopt.core.logging import configure_logging
from shapeopt.problem.loader import load_problem_config
from shapeopt.schemas.problem import ProblemConfig
from shapeopt.schemas.reports import ErrorReport
from shapeopt.services.acceptance import CHECKS
from shapeopt.services.dispatch import COMMAND_NAMES, execute_command
from shapeopt.utils.serialization import artifact_name, report_to_json, write_artifacts

logger = logging.getLogger(__name__)

DEFAULT_OUT_DIR = Path("results")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapeopt",
        description="Semilinear shape optimization: relaxed densities and stability of the ball.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMAND_NAMES, help="Pipeline to run")
    parser.add_argument("--config", type=str, default=None, help="YAML problem definition")
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT_DIR, help="Output directory")
    parser.add_argument("--seed", type=_seed, default=None, help="Override probes.seed")
    parser.add_argument("--modes", type=int, default=None, help="Override radial.modes (K)")
    parser.add_argument("--grid", type=int, default=None, help="Override grid.n")
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    parser.add_argument(
        "--check",
        action="append",
        choices=list(CHECKS),
        default=None,
        help="validate: run only this acceptance check (repeatable)",
    )
    return parser


def _load_config(args: argparse.Namespace) -> ProblemConfig:
    config = load_problem_config(args.config) if args.config else ProblemConfig()
    try:
        return config.with_overrides(grid=args.grid, modes=args.modes, seed=args.seed)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(f"invalid override: {first['msg']}", path=args.config) from e


def _write_error(out_dir: Path, command: str, error: ShapeOptError) -> None:
    report = ErrorReport(
        error=type(error).__name__,
        message=str(error),
        exit_code=error.exit_code,
        details={key: value for key, value in error.details.items() if value is not None} or None,
    )
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / artifact_name(command, "error", "json")).write_text(
            report_to_json(report), encoding="utf-8"
        )
    except OSError:
        logger.warning("Could not write error report", extra={"out_dir": str(out_dir)})


def run(argv: Sequence[str] | None = None, *, setup_logging: bool = True) -> int:
    """Parse arguments, run one command and write its artifacts.

    Returns:
        0 on success, 1 on precondition or config failure, 2 on numerical
        non-convergence (or a failed acceptance check).
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_PRECONDITION

    if setup_logging:
        settings = get_settings()
        configure_logging(
            "WARNING" if args.quiet else settings.log_level, environment=settings.environment
        )

    try:
        config = _load_config(args)
        result = execute_command(args.command, config, checks=args.check)
    except ShapeOptError as e:
        logger.error(
            "Command failed",
            extra={"command": args.command, "error": type(e).__name__, "exit_code": e.exit_code},
            exc_info=e.exit_code != EXIT_PRECONDITION,
        )
        print(f"shapeopt {args.command}: {e}", file=sys.stderr)
        _write_error(args.out, args.command, e)
        return e.exit_code

    paths = write_artifacts(args.out, args.command, config.config_hash(), result.artifacts)
    if result.table is not None:
        print(result.table)
    if not args.quiet:
        for path in paths:
            print(path)
    return result.exit_code


__all__ = ["build_parser", "run"]
