"""
amoeba: sample the amoeba of f_{l,m} and measure its distance to the tropical curve

Text output is the CSV sample (unless --output names a file) followed by one
summary line m,distance.
"""
import io
import logging

from app.commands import CommandResult, ExitCode, window
from app.models.schemas import load_polynomial
from app.services.amoeba import approximation_run, write_csv, write_gnuplot

logger = logging.getLogger(__name__)


def amoeba(args) -> CommandResult:
    p = load_polynomial(args.input)
    report = approximation_run(p, args.l, args.m, args.grid, args.window)
    sample = report.sample

    out = io.StringIO()
    if args.output:
        write_csv(sample, args.output)
    else:
        write_csv(sample, out)
    if args.gnuplot:
        write_gnuplot(sample, args.gnuplot)
    out.write(f"{report.m},{report.distance:.17g}\n")
    logger.info(
        "Amoeba written",
        extra={
            "csv": args.output or "stdout",
            "gnuplot": args.gnuplot,
            "points": len(sample),
            "rejected": sample.rejected,
            "degenerate": sample.degenerate,
            "t": sample.t,
            "mass_normalization": report.mass_normalization,
        },
    )

    payload = {
        "l": report.l,
        "m": report.m,
        "points": len(sample),
        "rejected": sample.rejected,
        "degenerate": sample.degenerate,
        "t": sample.t,
        "distance": report.distance,
        "mass_normalization": report.mass_normalization,
    }
    raw = None if args.json_output else out.getvalue()
    return CommandResult(ExitCode.SUCCESS, [], payload, raw)


def register(subparsers, common) -> None:
    parser = subparsers.add_parser(
        "amoeba", parents=[common], help="amoeba sample of f_{l,m} against V_T(p)"
    )
    parser.add_argument("--input", required=True, help="PolynomialDocument JSON, n = 2")
    parser.add_argument("--l", type=int, default=1, help="coefficient exponent scale")
    parser.add_argument("--m", type=int, default=1, help="monomial exponent scale")
    parser.add_argument("--grid", type=int, help="moduli and phases per axis")
    parser.add_argument("--window", type=window, help="LO:HI, e.g. --window=-4:4")
    parser.add_argument("--output", help="CSV file for the sampled points, stdout if omitted")
    parser.add_argument("--gnuplot", help="gnuplot data file for the sampled points")
    parser.set_defaults(handler=amoeba)
