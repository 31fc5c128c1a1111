"""
validate, certify, extremal and pairing: checks on a CycleDocument
"""
import logging

from app.commands import CommandResult, ExitCode, exact, int_list, point, verdict
from app.models.schemas import load_cycle
from app.services.complexes import facet_star, is_balanced, is_strongly_extremal
from app.services.currents import (
    PairingQuery,
    boundary_pairing,
    build_frames,
    closedness_certificate,
    extremality_certificate,
)
from app.utils.exact import format_fraction

logger = logging.getLogger(__name__)


def validate(args) -> CommandResult:
    C = load_cycle(args.input)
    report = is_balanced(C)
    lines = ["balanced" if report.balanced else "unbalanced"]
    for f in report.facets:
        if not f.balanced:
            lines.append(
                f"facet {f.facet}: weighted sum {point(f.weighted_sum)} "
                f"leaves the facet span by {point(f.defect)}"
            )
    payload = {
        "balanced": report.balanced,
        "cells": len(C.cells),
        "facets": len(C.facets),
        "failing": [
            {"facet": f.facet, "weighted_sum": list(f.weighted_sum), "defect": list(f.defect)}
            for f in report.facets
            if not f.balanced
        ],
    }
    return CommandResult(verdict(report.balanced), lines, payload)


def certify(args) -> CommandResult:
    C = load_cycle(args.input)
    report = closedness_certificate(C)
    lines = [
        "closed" if report.closed else "not closed",
        f"agrees with balancing: {'yes' if report.agrees_with_balancing else 'no'}",
    ]
    for facet, J, value in report.witnesses:
        lines.append(f"facet {facet}, J = {point(J)}: pairing {format_fraction(value)}")
    payload = {
        "closed": report.closed,
        "balanced": report.balanced,
        "witnesses": [
            {"facet": facet, "J": list(J), "value": format_fraction(value)}
            for facet, J, value in report.witnesses
        ],
    }
    return CommandResult(verdict(report.closed and report.agrees_with_balancing), lines, payload)


def extremal(args) -> CommandResult:
    C = load_cycle(args.input)
    report = is_strongly_extremal(C)
    certificate = extremality_certificate(C)
    systems = [certificate.rigidity[e.facet] for e in report.facets]
    fourier = certificate.fourier

    problems = []
    if not report.connected:
        problems.append(f"{report.components} components in codimension one")
    for e, system in zip(report.facets, systems):
        reasons = []
        if e.valency != report.expected_valency:
            reasons.append(f"valency {e.valency} ≠ {report.expected_valency} at facet {e.facet}")
        if not e.sub_independent:
            reasons.append(f"projected directions at facet {e.facet} are not sub-independent")
        if not e.spans:
            reasons.append(f"projected directions at facet {e.facet} do not span")
        if reasons:
            problems.append("; ".join(reasons + [f"rigidity dim {system.dimension}"]))

    holds = report.strongly_extremal
    lines = ["strongly extremal" if holds else "not strongly extremal"] + problems
    for e, system in zip(report.facets, systems):
        kernel = ", ".join(point(v) for v in system.kernel)
        lines.append(
            f"facet {e.facet}: valency {e.valency}, rigidity dim {system.dimension}, "
            f"kernel [{kernel}]"
        )
    checked = sum(len(ells) for ells in fourier.frequencies.values())
    lines.append(
        f"fourier: {checked} frequencies checked, {len(fourier.failures)} without obstruction"
    )
    for facet, cell, ell in fourier.failures[:5]:
        lines.append(f"  facet {facet}, cell {cell}, l = {point(ell)}: no obstruction")
    lines.append(
        "extremality certificate: " + ("certified" if certificate.certified else "not certified")
    )
    payload = {
        "strongly_extremal": holds,
        "connected": report.connected,
        "balanced": report.balanced,
        "expected_valency": report.expected_valency,
        "facets": [
            {
                "facet": e.facet,
                "valency": e.valency,
                "sub_independent": e.sub_independent,
                "spans": e.spans,
                "rigidity_dimension": system.dimension,
                "kernel": exact(system.kernel),
            }
            for e, system in zip(report.facets, systems)
        ],
        "certificate": {
            "certified": certificate.certified,
            "components": certificate.components,
            "fourier_certified": fourier.certified,
            "fourier_failures": [
                {"facet": facet, "cell": cell, "frequency": list(ell)}
                for facet, cell, ell in fourier.failures
            ],
        },
    }
    return CommandResult(verdict(holds), lines, payload)


def pairing(args) -> CommandResult:
    C = load_cycle(args.input)
    star = facet_star(C, args.facet)
    nu = tuple(args.nu) if args.nu is not None else (0,) * C.ambient
    query = PairingQuery(star, nu, tuple(args.J))
    value = boundary_pairing(query, build_frames(C, star))
    logger.debug("Pairing evaluated", extra={"facet": args.facet, "value": value})
    lines = [
        f"pairing at facet {args.facet}, nu = {point(nu)}, J = {point(args.J)}: "
        f"{format_fraction(value)}"
    ]
    payload = {"facet": args.facet, "nu": list(nu), "J": list(args.J), "value": exact(value)}
    return CommandResult(ExitCode.SUCCESS, lines, payload)


def register(subparsers, common) -> None:
    commands = [
        ("validate", validate, "check the balancing condition of a cycle"),
        ("certify", certify, "closedness certificate of the tropical current"),
        ("extremal", extremal, "strong extremality and per-facet rigidity"),
        ("pairing", pairing, "one boundary pairing at a facet star"),
    ]
    for name, handler, description in commands:
        parser = subparsers.add_parser(name, parents=[common], help=description)
        parser.add_argument("--input", required=True, help="CycleDocument JSON")
        parser.set_defaults(handler=handler)
        if name == "pairing":
            parser.add_argument("--facet", type=int, required=True, help="facet index")
            parser.add_argument("--nu", type=int_list, help="frequency a,b,...; zero by default")
            parser.add_argument(
                "--J", type=int_list, required=True, help="1-based indices i,j,..."
            )
