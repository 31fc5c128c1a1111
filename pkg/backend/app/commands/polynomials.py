"""
hyper, ma and intersect: tropical polynomials and their intersection theory
"""
import logging
from pathlib import Path

from app.commands import CommandResult, ExitCode, exact, point, require_inputs, verdict
from app.exceptions import IntersectionError
from app.models.schemas import CycleDocument, dump_document, load_polynomial
from app.services.intersect import (
    AtomicMeasure,
    intersection_report,
    monge_ampere,
    transversal_points,
)
from app.services.troppoly import hypersurface
from app.utils.exact import format_fraction

logger = logging.getLogger(__name__)


def _measure_lines(measure: AtomicMeasure):
    return [f"{point(x)}: {format_fraction(m)}" for x, m in measure.atoms]


def _measure_payload(measure: AtomicMeasure):
    return [{"point": exact(x), "mass": format_fraction(m)} for x, m in measure.atoms]


def hyper(args) -> CommandResult:
    p = load_polynomial(args.input)
    document = CycleDocument.from_complex(hypersurface(p))
    text = dump_document(document)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info("Hypersurface written", extra={"path": args.output})
        return CommandResult(
            ExitCode.SUCCESS,
            [f"{len(document.cells)} cells written to {args.output}"],
            {"cells": len(document.cells), "output": args.output},
        )
    return CommandResult(ExitCode.SUCCESS, raw=text)


def ma(args) -> CommandResult:
    p = load_polynomial(args.input)
    measure = monge_ampere(p)
    lines = _measure_lines(measure) + [f"total mass = {format_fraction(measure.total_mass)}"]
    payload = {"atoms": _measure_payload(measure), "total_mass": exact(measure.total_mass)}
    return CommandResult(ExitCode.SUCCESS, lines, payload)


def intersect(args) -> CommandResult:
    require_inputs(args.input)
    ps = [load_polynomial(path) for path in args.input]
    report = intersection_report(ps)
    count = report["stable_intersection_number"]
    bernstein = report["bernstein_number"]

    lines = _measure_lines(report["measure"]) + [
        f"stable intersection number = {format_fraction(count)}",
        f"bernstein number = {format_fraction(bernstein)}",
    ]
    payload = {
        "atoms": _measure_payload(report["measure"]),
        "stable_intersection_number": exact(count),
        "bernstein_number": exact(bernstein),
    }
    if args.transversal:
        if len(ps) != 2:
            raise IntersectionError("--transversal needs exactly two plane curves")
        oracle = transversal_points(hypersurface(ps[0]), hypersurface(ps[1]))
        lines.append(f"transversal count = {format_fraction(oracle.total_mass)}")
        payload["transversal_count"] = exact(oracle.total_mass)
    if count != bernstein:
        logger.error(
            "Intersection counts disagree", extra={"stable": count, "bernstein": bernstein}
        )
    return CommandResult(verdict(count == bernstein), lines, payload)


def register(subparsers, common) -> None:
    parser = subparsers.add_parser(
        "hyper", parents=[common], help="corner locus of a tropical polynomial as a cycle"
    )
    parser.add_argument("--input", required=True, help="PolynomialDocument JSON")
    parser.add_argument("--output", help="write the CycleDocument here instead of stdout")
    parser.set_defaults(handler=hyper)

    parser = subparsers.add_parser(
        "ma", parents=[common], help="Monge-Ampere measure of a tropical polynomial"
    )
    parser.add_argument("--input", required=True, help="PolynomialDocument JSON")
    parser.set_defaults(handler=ma)

    parser = subparsers.add_parser(
        "intersect", parents=[common], help="stable intersection of n polynomials in n variables"
    )
    parser.add_argument(
        "--input", action="append", default=[], help="PolynomialDocument JSON, repeated n times"
    )
    parser.add_argument(
        "--transversal",
        action="store_true",
        help="also count crossings of two plane curves directly",
    )
    parser.set_defaults(handler=intersect)
