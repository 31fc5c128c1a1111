"""
Subcommand groups of the command line tool.

Each module exposes ``register(subparsers, common)`` and attaches a handler
with ``set_defaults(handler=...)``. Handlers return a ``CommandResult``; the
caller decides whether to print its text lines or its JSON payload.
"""
import argparse
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.config import parse_window
from app.exceptions import DocumentError
from app.utils.exact import format_fraction


class ExitCode(IntEnum):
    SUCCESS = 0
    PROPERTY_FALSE = 1
    INPUT_ERROR = 2


@dataclass
class CommandResult:
    exit_code: ExitCode
    lines: List[str] = field(default_factory=list)
    payload: Dict[str, Any] = field(default_factory=dict)
    raw: Optional[str] = None  # printed verbatim instead of lines, e.g. a document


def verdict(holds: bool) -> ExitCode:
    return ExitCode.SUCCESS if holds else ExitCode.PROPERTY_FALSE


def int_list(text: str) -> List[int]:
    """argparse type for "a,b,c"; an empty string is the empty list"""
    if not text.strip():
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from e


def window(text: str) -> Tuple[float, float]:
    try:
        return parse_window(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def basis(text: str) -> List[List[int]]:
    """Vectors separated by ';', entries by ','"""
    return [int_list(part) for part in text.split(";") if part.strip()]


def point(values: Sequence) -> str:
    return "(" + ", ".join(format_fraction(x) for x in values) + ")"


def exact(value) -> Any:
    """JSON-ready form of Fractions nested in tuples and lists"""
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (tuple, list)):
        return [exact(v) for v in value]
    if isinstance(value, dict):
        return {k: exact(v) for k, v in value.items()}
    return value


def require_inputs(paths: Sequence[str], count: Optional[int] = None) -> None:
    if not paths:
        raise DocumentError("no --input given", invariant="input document")
    if count is not None and len(paths) != count:
        raise DocumentError(f"{len(paths)} inputs given; need {count}", invariant="input document")
