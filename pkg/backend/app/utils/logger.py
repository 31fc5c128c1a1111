import logging
import sys
from datetime import datetime, timezone
from fractions import Fraction

from pythonjsonlogger import jsonlogger

from app.utils.exact import format_fraction


def _render(value):
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, (tuple, list)) and any(isinstance(v, Fraction) for v in value):
        return "(" + ", ".join(_render(v) for v in value) + ")"
    return value


class RationalFormattingFilter(logging.Filter):
    """Render Fraction arguments and extras as "a/b" instead of Fraction(a, b)"""

    def filter(self, record):
        if hasattr(record, "args") and record.args:
            if isinstance(record.args, dict):
                record.args = {k: _render(v) for k, v in record.args.items()}
            else:
                record.args = tuple(_render(arg) for arg in record.args)

        for key, value in list(record.__dict__.items()):
            rendered = _render(value)
            if rendered is not value:
                record.__dict__[key] = rendered

        return True


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    def add_fields(self, log_record, record, message_dict):
        super(CustomJsonFormatter, self).add_fields(log_record, record, message_dict)
        log_record["timestamp"] = datetime.now(timezone.utc).isoformat()
        log_record["level"] = record.levelname
        log_record["logger"] = record.name


def setup_logging(log_level: str = "WARNING", json_format: bool = True):
    """
    Setup logging for the command line tool.

    Diagnostics go to stderr so stdout stays reserved for results.
    Calling it twice replaces the handler instead of stacking a second one.
    """
    handler = logging.StreamHandler(sys.stderr)
    if json_format:
        handler.setFormatter(CustomJsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler.addFilter(RationalFormattingFilter())
    handler.set_name("tropical")

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level.upper())
    for existing in list(root_logger.handlers):
        if existing.get_name() == "tropical":
            root_logger.removeHandler(existing)
    root_logger.addHandler(handler)

    logging.getLogger("sympy").setLevel(logging.WARNING)

    return root_logger
