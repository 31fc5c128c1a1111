"""
binomials: toric equations of a saturated lattice or of every cell of a cycle
"""
from app.commands import CommandResult, ExitCode, basis, point
from app.exceptions import ToricError
from app.models.schemas import load_cycle
from app.services.toric import BinomialSystem, binomial_system, cell_binomials
from app.utils.exact import format_fraction


def _rationals(text: str):
    return [part.strip() for part in text.split(",") if part.strip()]


def _describe(system: BinomialSystem):
    lines, entries = [], []
    for b in system.binomials:
        lines.append(f"  {b}    degree {b.degree}")
        entries.append(
            {
                "binomial": str(b),
                "exponent": list(b.exponent),
                "phase": format_fraction(b.phase),
                "modulus": format_fraction(b.modulus) if b.modulus is not None else None,
                "degree": b.degree,
            }
        )
    if not system.binomials:
        lines.append("  (no equations: the whole torus)")
    return lines, entries


def binomials(args) -> CommandResult:
    if (args.input is None) == (args.basis is None):
        raise ToricError("give exactly one of --input and --basis", invariant="input document")

    if args.basis is not None:
        system = binomial_system(
            args.basis,
            phases=_rationals(args.phases) if args.phases else None,
            base=_rationals(args.base) if args.base else None,
            ambient=args.ambient,
        )
        lines, entries = _describe(system)
        return CommandResult(
            ExitCode.SUCCESS,
            [f"basis {'; '.join(point(v) for v in args.basis)}:"] + lines,
            {"binomials": entries},
        )

    if args.phases or args.base:
        raise ToricError("--phases and --base apply to --basis only", invariant="input document")
    lines, payload = [], []
    for index, system in cell_binomials(load_cycle(args.input)):
        described, entries = _describe(system)
        lines += [f"cell {index}:"] + described
        payload.append({"cell": index, "binomials": entries})
    return CommandResult(ExitCode.SUCCESS, lines, {"cells": payload})


def register(subparsers, common) -> None:
    parser = subparsers.add_parser(
        "binomials", parents=[common], help="binomial equations and projective degrees"
    )
    parser.add_argument("--input", help="CycleDocument JSON; one system per cell")
    parser.add_argument("--basis", type=basis, help="saturated basis 'a,b;c,d'")
    parser.add_argument("--ambient", type=int, help="ambient dimension for an empty basis")
    parser.add_argument("--phases", help="phase angles as fractions of a turn, 'q1,q2,...'")
    parser.add_argument("--base", help="base point 'a1,a2,...' recording exact moduli")
    parser.set_defaults(handler=binomials)
