"""
Command line entry point.

Results go to stdout (text, or JSON with --json); diagnostics and logs go to
stderr. Exit codes: 0 success or property true, 1 property false, 2 input
error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from app.commands import CommandResult, ExitCode, amoeba, cycles, polynomials, toric
from app.config import get_settings
from app.exceptions import InvalidInputError
from app.utils.logger import setup_logging

logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def create_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="tropical",
        description="Tropical cycles, their currents, intersections and amoebas.",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=LOG_LEVELS,
        help=f"log level for stderr diagnostics (default {settings.log_level})",
    )
    parser.add_argument(
        "--version", action="version", version=f"{settings.app_name} {settings.app_version}"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", dest="json_output", action="store_true", help="machine-readable report"
    )

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for group in (cycles, polynomials, toric, amoeba):
        group.register(subparsers, common)
    return parser


def _emit(result: CommandResult, json_output: bool) -> None:
    if result.raw is not None:
        sys.stdout.write(result.raw)
    elif json_output:
        report = {"exit_code": int(result.exit_code), **result.payload}
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(result.lines) + "\n")


def run(argv: Optional[List[str]] = None) -> int:
    try:
        settings = get_settings()
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return ExitCode.INPUT_ERROR

    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help
        return int(e.code or 0)

    setup_logging(args.log_level or settings.log_level, settings.log_json)
    logger.debug("Running command", extra={"command": args.command})

    try:
        result = args.handler(args)
    except InvalidInputError as e:
        logger.warning(
            "Input rejected", extra={"command": args.command, "invariant": e.invariant}
        )
        sys.stderr.write(f"error: {e} [violated invariant: {e.invariant}]\n")
        return ExitCode.INPUT_ERROR
    except Exception:
        logger.error("Command failed", extra={"command": args.command}, exc_info=True)
        raise

    _emit(result, args.json_output)
    return int(result.exit_code)


def main() -> None:
    sys.exit(run())
