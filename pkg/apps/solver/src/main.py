#!/usr/bin/env python3
"""
Eigensolver command line for the coupled oscillator and the harmonium atom.

    osc spectrum        exact levels eps_jn and the Gaussian variational optimum
    osc variational     variational optimum only
    harmonium ground    E0(k) by Riccati-Pade or Rayleigh-Ritz
    harmonium table1    the benchmark energies (optionally checked against published values)
    harmonium figure1   E0(k) curve, CSV plus optional SVG
    harmonium compare   Riccati-Pade against Rayleigh-Ritz on the benchmark k values
    harmonium spectrum  Rayleigh-Ritz bounds for the relative s-levels
    serve               HTTP API

Results go to stdout (or --output), logs to stderr. Exit codes: 0 success,
2 invalid input, 3 solver failure.
"""

import argparse
import logging
import sys
from pathlib import Path

from .config import (
    BENCHMARKS_PATH,
    FIGURE_DIGITS,
    HTTP_PORT,
    LOG_LEVEL,
    RR_BASIS_MAX,
    SOLVER_DIGITS,
    SOLVER_PRECISION,
    SOLVER_WORKERS,
)
from .errors import InvalidInput, SolverError
from .models.physics import OscillatorModel
from .models.results import Method, format_real
from .services.benchmarks import (
    BenchmarkSet,
    check_table1,
    compare,
    compare_passed,
    figure1,
    ground_energy,
    harmonium_levels,
    osc_report,
    table1,
    variational_summary,
)
from .services.report import FORMATS, render, render_blocks, render_json

logger = logging.getLogger(__name__)

SUCCESS = 0
FAILURE = 3


def _digits(args: argparse.Namespace, default: int = SOLVER_DIGITS) -> int:
    return args.digits if args.digits is not None else default


def _osc_spectrum(args: argparse.Namespace) -> tuple[str, int]:
    physical = {"hbar": args.hbar, "mass": args.mass, "k": args.k, "K": args.K}
    model = None
    if any(v is not None for v in physical.values()):
        if args.lam is not None:
            raise InvalidInput("give either --lam or --hbar/--mass/--k/--K, not both")
        missing = [f"--{name}" for name, v in physical.items() if v is None]
        if missing:
            raise InvalidInput(f"physical oscillator parameters incomplete, missing {' '.join(missing)}")
        model = OscillatorModel(**physical)
    elif args.lam is None:
        raise InvalidInput("give --lam or the physical set --hbar --mass --k --K")

    digits = _digits(args)
    report = osc_report(args.lam, args.j_max, args.n_max, digits, args.precision, model)
    if model is not None:
        logger.info(f"K/k reduces to lambda = {format_real(report.lam, digits)}")
    if args.format == "json":
        return render_json(report.to_record()), SUCCESS
    summary = {"lambda": format_real(report.lam, digits), **report.summary.to_record()}
    blocks = {"spectrum": [row.to_record() for row in report.spectrum], "variational": [summary]}
    return render_blocks(blocks, args.format), SUCCESS


def _osc_variational(args: argparse.Namespace) -> tuple[str, int]:
    summary = variational_summary(args.lam, _digits(args), args.precision)
    return render([summary.to_record()], args.format), SUCCESS


def _harmonium_ground(args: argparse.Namespace) -> tuple[str, int]:
    result = ground_energy(args.k, args.method, _digits(args), args.precision)
    return render([{"k": args.k, **result.to_record()}], args.format), SUCCESS


def _harmonium_table1(args: argparse.Namespace) -> tuple[str, int]:
    digits = _digits(args)
    benchmarks = BenchmarkSet.from_yaml(args.benchmarks)
    rows = table1(digits, args.precision, args.workers, benchmarks)
    text = render([row.to_record() for row in rows], args.format)

    code = SUCCESS if all(row.status == "ok" for row in rows) else FAILURE
    if args.check:
        failures = check_table1(rows, benchmarks, digits)
        for failure in failures:
            logger.error(f"Table 1 mismatch: {failure}")
        if failures:
            code = FAILURE
        else:
            logger.info(f"All {len(rows)} rows match the published values to {digits} digits")
    return text, code


def _harmonium_figure1(args: argparse.Namespace) -> tuple[str, int]:
    benchmarks = BenchmarkSet.from_yaml(args.benchmarks) if Path(args.benchmarks).exists() else BenchmarkSet()
    curve = figure1(
        k_min=args.k_min or benchmarks.figure_k_min,
        k_max=args.k_max or benchmarks.figure_k_max,
        samples=args.samples if args.samples is not None else benchmarks.figure_samples,
        overlay=args.overlay,
        svg_path=args.svg,
        target_digits=_digits(args, FIGURE_DIGITS),
        precision=args.precision,
        workers=args.workers,
    )
    code = SUCCESS if all(sample.status == "ok" for sample in curve) else FAILURE
    return render([sample.to_record() for sample in curve], args.format), code


def _harmonium_compare(args: argparse.Namespace) -> tuple[str, int]:
    benchmarks = BenchmarkSet.from_yaml(args.benchmarks)
    rows = compare(_digits(args), args.basis, args.precision, args.workers, benchmarks)
    text = render([row.to_record() for row in rows], args.format)
    return text, SUCCESS if compare_passed(rows) else FAILURE


def _harmonium_spectrum(args: argparse.Namespace) -> tuple[str, int]:
    levels = harmonium_levels(args.k, args.basis, args.levels, _digits(args), args.precision)
    return render([level.to_record() for level in levels], args.format), SUCCESS


def _serve(args: argparse.Namespace) -> tuple[str, int]:
    import uvicorn

    from .api import app

    config = uvicorn.Config(app, host=args.host, port=args.port, log_level=args.log_level.lower())
    logger.info(f"HTTP API starting on {args.host}:{args.port}")
    uvicorn.Server(config).run()
    return "", SUCCESS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonium-solver",
        description="High-precision eigenvalues of the coupled oscillator and the harmonium atom",
    )
    parser.add_argument("--digits", type=int, default=None,
                        help=f"target significant digits (default {SOLVER_DIGITS}, {FIGURE_DIGITS} for figure1)")
    parser.add_argument("--precision", type=int, default=SOLVER_PRECISION,
                        help="working decimal precision (default max(50, 3 x digits))")
    parser.add_argument("--format", choices=FORMATS, default="csv")
    parser.add_argument("--output", type=Path, default=None, help="write results to a file instead of stdout")
    parser.add_argument("--workers", type=int, default=SOLVER_WORKERS, help="worker processes for row sweeps")
    parser.add_argument("--benchmarks", default=BENCHMARKS_PATH, help="benchmark YAML file")
    parser.add_argument("--log-level", default=LOG_LEVEL, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    models = parser.add_subparsers(dest="model", required=True)

    osc = models.add_parser("osc", help="coupled harmonic oscillators").add_subparsers(dest="command", required=True)
    spectrum = osc.add_parser("spectrum", help="exact spectrum and variational summary")
    spectrum.add_argument("--lam", help="dimensionless coupling lambda = K/k")
    spectrum.add_argument("--hbar")
    spectrum.add_argument("--mass")
    spectrum.add_argument("--k", help="harmonic spring constant")
    spectrum.add_argument("--K", help="coupling spring constant")
    spectrum.add_argument("--j-max", type=int, default=1)
    spectrum.add_argument("--n-max", type=int, default=1)
    spectrum.set_defaults(handler=_osc_spectrum)

    variational = osc.add_parser("variational", help="Gaussian variational optimum")
    variational.add_argument("--lam", required=True)
    variational.set_defaults(handler=_osc_variational)

    harmonium = models.add_parser("harmonium", help="harmonium atom").add_subparsers(dest="command", required=True)
    ground = harmonium.add_parser("ground", help="ground-state energy E0(k)")
    ground.add_argument("--k", required=True)
    ground.add_argument("--method", choices=[Method.RPM.value, Method.RR.value], default=Method.RPM.value)
    ground.set_defaults(handler=_harmonium_ground)

    table = harmonium.add_parser("table1", help="benchmark energies")
    table.add_argument("--check", action="store_true", help="compare against the published values")
    table.set_defaults(handler=_harmonium_table1)

    figure = harmonium.add_parser("figure1", help="E0(k) curve")
    figure.add_argument("--k-min")
    figure.add_argument("--k-max")
    figure.add_argument("--samples", type=int)
    figure.add_argument("--overlay", type=Path, help="external k,E0 CSV drawn dashed")
    figure.add_argument("--svg", type=Path, help="write the curve as SVG")
    figure.set_defaults(handler=_harmonium_figure1)

    cmp = harmonium.add_parser("compare", help="Riccati-Pade against Rayleigh-Ritz")
    cmp.add_argument("--basis", type=int, default=RR_BASIS_MAX)
    cmp.set_defaults(handler=_harmonium_compare)

    levels = harmonium.add_parser("spectrum", help="Rayleigh-Ritz relative s-levels")
    levels.add_argument("--k", required=True)
    levels.add_argument("--basis", type=int, default=RR_BASIS_MAX)
    levels.add_argument("--levels", type=int, default=5)
    levels.set_defaults(handler=_harmonium_spectrum)

    serve = models.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--host", default="0.0.0.0")
    serve.add_argument("--port", type=int, default=HTTP_PORT)
    serve.set_defaults(handler=_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )

    try:
        text, code = args.handler(args)
    except SolverError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code

    if args.output:
        args.output.write_text(text)
        logger.info(f"Results written to {args.output}")
    elif text:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
