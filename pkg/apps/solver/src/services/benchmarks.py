"""
Benchmark assembly: harmonium ground energies E0(k), the Table 1 rows, the
E0(k) curve, the two-method comparison and the coupled-oscillator report.

All harmonium work is in atomic-like units hbar = m = e = 1, so
lambda = k^(-1/4) and E0 = sqrt(k) (3/2 + eps0).
"""

import csv
import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

import yaml
from mpmath import mp, mpf

from ..config import (
    BENCHMARKS_PATH,
    FIGURE_DIGITS,
    RR_BASIS_MAX,
    RR_BASIS_START,
    RR_BASIS_STEP,
    SOLVER_DIGITS,
    SOLVER_WORKERS,
)
from ..errors import InvalidInput, InvalidK, NoConvergence, OverlayParseError, SolverError
from ..models.physics import HarmoniumModel, ModelKind, OscillatorModel, QuantumNumbers, RadialProblem, Real
from ..models.results import (
    CompareRow,
    CurveSample,
    EnergyResult,
    LevelRow,
    Method,
    SpectrumRow,
    Table1Row,
    VariationalSummary,
    format_real,
)
from .harmonium_rpm import RpmConfig, rpm_ground
from .harmonium_rr import RrConfig, rr_ground, rr_spectrum
from .numerics import working_precision
from .oscillator_exact import check_bound, exact_eigenvalue, exact_ground
from .oscillator_variational import solve_stationarity, variational_energy
from .reduction import harmonium_reduce, oscillator_reduce, physical_energy

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

# Precision floor for the RPM/RR comparison
COMPARE_MIN_PRECISION = 80
# Agreement the two methods must reach on every Table 1 row
COMPARE_MIN_AGREEMENT = 12


@dataclass
class BenchmarkRow:
    k: str
    E0: str


@dataclass
class BenchmarkSet:
    """Table 1 spring constants with their published energies, plus the figure range."""
    rows: list[BenchmarkRow] = field(default_factory=list)
    figure_k_min: str = "0.0012"
    figure_k_max: str = "0.25"
    figure_samples: int = 100

    @classmethod
    def from_yaml(cls, path: str | Path) -> "BenchmarkSet":
        path = Path(path)
        if not path.exists():
            raise InvalidInput(f"benchmark file not found: {path}")
        with open(path) as f:
            data = yaml.safe_load(f) or {}

        try:
            rows = [BenchmarkRow(k=str(r["k"]), E0=str(r["E0"])) for r in data.get("table1", [])]
        except (KeyError, TypeError) as e:
            raise InvalidInput(f"malformed table1 entry in {path}: {e}") from e
        figure = data.get("figure", {}) or {}
        benchmarks = cls(
            rows=rows,
            figure_k_min=str(figure.get("k_min", cls.figure_k_min)),
            figure_k_max=str(figure.get("k_max", cls.figure_k_max)),
            figure_samples=int(figure.get("samples", cls.figure_samples)),
        )
        logger.debug(f"Loaded {len(rows)} benchmark rows from {path}")
        return benchmarks

    def published(self, k: Real) -> str | None:
        """Published E0 for the row whose k equals `k` numerically."""
        for row in self.rows:
            if mp.mpf(row.k) == mp.mpf(k):
                return row.E0
        return None


def _load(benchmarks: BenchmarkSet | None) -> BenchmarkSet:
    return benchmarks if benchmarks is not None else BenchmarkSet.from_yaml(BENCHMARKS_PATH)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = SOLVER_WORKERS) -> list[R]:
    """
    Order-preserving map, in worker processes when workers > 1.

    mpmath precision is process-global, so rows are never run on threads.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.info(f"Evaluating {len(items)} rows on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))


def agreement_digits(a: mpf, b: mpf, precision: int) -> int:
    """floor(-log10 |a - b| / |a|), capped at the digits the precision can resolve."""
    floor = mp.mpf(10) ** (-precision)
    rel = abs(a - b) / abs(a) if a != 0 else abs(b)
    digits = int(mp.floor(-mp.log10(max(rel, floor))))
    return min(digits, precision - 10)


def _parse_k(k: Real) -> mpf:
    try:
        value = mp.mpf(k)
    except (ValueError, TypeError) as e:
        raise InvalidK(f"spring constant must be a positive number, got {k!r}") from e
    if not value > 0:
        raise InvalidK(f"spring constant must be positive, got {k}")
    return value


def _basis_schedule(n_max: int = RR_BASIS_MAX) -> list[int]:
    sizes = list(range(RR_BASIS_START, n_max + 1, RR_BASIS_STEP))
    if not sizes or sizes[-1] != n_max:
        sizes.append(n_max)
    return sizes


def rr_converged(problem: RadialProblem, target_digits: int, precision: int) -> EnergyResult:
    """Rayleigh-Ritz ground level with the basis enlarged until successive sizes agree to target."""
    previous = None
    history: list[tuple[int, mpf]] = []
    for n_basis in _basis_schedule():
        value = rr_ground(problem, n_basis, precision)
        history.append((n_basis, value))
        if previous is not None:
            digits = agreement_digits(value, previous, precision)
            logger.debug(f"RR lambda={mp.nstr(problem.lam, 12)} N={n_basis}: {digits} agreeing digits")
            if digits >= target_digits:
                return EnergyResult(value=value, certified_digits=digits, method=Method.RR, orders_used=history, lam=problem.lam)
        previous = value
    raise NoConvergence(
        f"Rayleigh-Ritz did not reach {target_digits} digits by N={RR_BASIS_MAX}",
        best=history[-1][1],
    )


def ground_energy(
    k: Real,
    method: Method | str = Method.RPM,
    target_digits: int = SOLVER_DIGITS,
    precision: int | None = None,
) -> EnergyResult:
    """Harmonium ground-state energy E0(k) = sqrt(k) (3/2 + eps0(k^(-1/4)))."""
    try:
        method = Method(method)
    except ValueError as e:
        raise InvalidInput(f"unknown method {method!r}, expected rpm or rr") from e
    dps = working_precision(target_digits, precision)

    with mp.workdps(dps):
        k = _parse_k(k)
        scales = harmonium_reduce(HarmoniumModel(hbar=1, mass=1, charge=1, k=k))
        problem = RadialProblem(scales.lam)
        if method is Method.RPM:
            relative = rpm_ground(problem, RpmConfig(target_digits=target_digits, precision=dps))
        elif method is Method.RR:
            relative = rr_converged(problem, target_digits, dps)
        else:
            raise InvalidInput(f"method {method.value} does not apply to the harmonium")
        energy = physical_energy(scales, relative.value, ModelKind.HARMONIUM)

    logger.info(f"E0(k={mp.nstr(k, 15)}) = {mp.nstr(energy, relative.certified_digits)} [{method.value}]")
    return EnergyResult(
        value=energy,
        certified_digits=relative.certified_digits,
        method=method,
        orders_used=relative.orders_used,
        lam=scales.lam,
    )


def _table1_row(job: tuple[str, int, int | None]) -> Table1Row:
    k, target_digits, precision = job
    with mp.workdps(working_precision(target_digits, precision)):
        k_value = mp.mpf(k)
    try:
        result = ground_energy(k, Method.RPM, target_digits, precision)
    except SolverError as e:
        logger.error(f"Table 1 row k={k} failed: {e}")
        return Table1Row(k=k_value, E0=None, certified_digits=0, status=type(e).__name__, error=str(e))
    return Table1Row(k=k_value, E0=result.value, certified_digits=result.certified_digits)


def table1(
    target_digits: int = SOLVER_DIGITS,
    precision: int | None = None,
    workers: int = SOLVER_WORKERS,
    benchmarks: BenchmarkSet | None = None,
) -> list[Table1Row]:
    """Table 1 in benchmark-file order; failing rows are kept with their status."""
    benchmarks = _load(benchmarks)
    working_precision(target_digits, precision)
    jobs = [(row.k, target_digits, precision) for row in benchmarks.rows]
    rows = parallel_map(_table1_row, jobs, workers)
    failed = sum(1 for row in rows if row.status != "ok")
    logger.info(f"Table 1: {len(rows) - failed}/{len(rows)} rows certified to {target_digits} digits")
    return rows


def check_table1(rows: list[Table1Row], benchmarks: BenchmarkSet | None = None, target_digits: int = SOLVER_DIGITS) -> list[str]:
    """Rows deviating from the published values by 5 x 10^-(digits+1) or more, as messages."""
    benchmarks = _load(benchmarks)
    failures = []
    with mp.workdps(working_precision(target_digits)):
        limit = 5 * mp.mpf(10) ** (-(target_digits + 1))
        for row in rows:
            published = benchmarks.published(row.k)
            if published is None:
                failures.append(f"k={mp.nstr(row.k, 15)}: no published value")
                continue
            if row.E0 is None:
                failures.append(f"k={mp.nstr(row.k, 15)}: {row.status}")
                continue
            reference = mp.mpf(published)
            deviation = abs(row.E0 - reference) / abs(reference)
            if deviation >= limit:
                failures.append(
                    f"k={mp.nstr(row.k, 15)}: {mp.nstr(row.E0, target_digits)} vs published {published} "
                    f"(relative deviation {mp.nstr(deviation, 3)})"
                )
    return failures


def log_grid(k_min: Real, k_max: Real, samples: int) -> list[mpf]:
    """Log-spaced spring constants with the endpoints taken exactly."""
    if samples < 2:
        raise InvalidInput(f"a curve needs at least 2 samples, got {samples}")
    lo, hi = _parse_k(k_min), _parse_k(k_max)
    if not lo < hi:
        raise InvalidInput(f"k range must satisfy k_min < k_max, got {k_min}, {k_max}")
    ratio = hi / lo
    grid = [lo * ratio ** (mp.mpf(i) / (samples - 1)) for i in range(samples)]
    grid[0], grid[-1] = lo, hi
    return grid


def read_overlay(path: str | Path) -> list[tuple[float, float]]:
    """External k,E0 pairs; header optional, whitespace around fields ignored."""
    path = Path(path)
    try:
        with open(path, newline="") as f:
            lines = list(csv.reader(f))
    except OSError as e:
        raise OverlayParseError(f"cannot read overlay {path}: {e}") from e

    points = []
    for number, fields in enumerate(lines, start=1):
        fields = [x.strip() for x in fields]
        if not any(fields):
            continue
        if len(fields) != 2:
            raise OverlayParseError(f"{path}:{number}: expected 2 columns k,E0, got {len(fields)}")
        try:
            points.append((float(fields[0]), float(fields[1])))
        except ValueError:
            if points or number != _first_content_line(lines):
                raise OverlayParseError(f"{path}:{number}: not a number pair: {','.join(fields)}") from None
            logger.debug(f"Overlay header skipped: {fields}")
    if not points:
        raise OverlayParseError(f"{path}: no data rows")
    return points


def _first_content_line(lines: list[list[str]]) -> int:
    for number, fields in enumerate(lines, start=1):
        if any(x.strip() for x in fields):
            return number
    return 0


def _curve_sample(job: tuple[mpf, int, int | None]) -> CurveSample:
    k, target_digits, precision = job
    try:
        result = ground_energy(k, Method.RPM, target_digits, precision)
    except SolverError as e:
        logger.error(f"Figure sample k={mp.nstr(k, 15)} failed: {e}")
        return CurveSample(k=k, E0=None, digits=target_digits, status=type(e).__name__, error=str(e))
    return CurveSample(k=k, E0=result.value, digits=target_digits)


def figure1(
    k_min: Real,
    k_max: Real,
    samples: int,
    overlay: str | Path | None = None,
    svg_path: str | Path | None = None,
    target_digits: int = FIGURE_DIGITS,
    precision: int | None = None,
    workers: int = SOLVER_WORKERS,
) -> list[CurveSample]:
    """E0(k) on a log grid by RPM; optionally drawn to SVG with an external curve for comparison."""
    dps = working_precision(target_digits, precision)
    overlay_points = read_overlay(overlay) if overlay is not None else None
    with mp.workdps(dps):
        grid = log_grid(k_min, k_max, samples)

    curve = parallel_map(_curve_sample, [(k, target_digits, precision) for k in grid], workers)

    if svg_path is not None and not any(sample.E0 is not None for sample in curve):
        logger.warning(f"No sample solved; {svg_path} not written")
    elif svg_path is not None:
        from .report import render_svg

        Path(svg_path).write_text(render_svg(curve, overlay_points))
        logger.info(f"Figure written to {svg_path}")
    return curve


def upper_bound_holds(rr: mpf, rpm: EnergyResult, precision: int) -> bool:
    """
    rr >= rpm, with rpm allowed its own certified error.

    The slack is |rpm| x 10^-certified_digits and never less than 10^-(precision-10).
    """
    slack = max(abs(rpm.value) * mp.mpf(10) ** (-rpm.certified_digits), mp.mpf(10) ** (10 - precision))
    return rr >= rpm.value - slack


def _compare_row(job: tuple[str, int, int, int, str | None]) -> CompareRow:
    k, target_digits, n_basis, dps, published = job
    rpm = ground_energy(k, Method.RPM, target_digits, dps)
    with mp.workdps(dps):
        k_value = mp.mpf(k)
        scales = harmonium_reduce(HarmoniumModel(hbar=1, mass=1, charge=1, k=k_value))
        eps_rr = rr_ground(RadialProblem(scales.lam), n_basis, dps)
        rr = physical_energy(scales, eps_rr, ModelKind.HARMONIUM)
        agree = agreement_digits(rpm.value, rr, dps)
        upper = upper_bound_holds(rr, rpm, dps)
        published_digits = agreement_digits(mp.mpf(published), rpm.value, dps) if published else None
    if agree < COMPARE_MIN_AGREEMENT or not upper:
        logger.error(f"k={k}: RPM and RR N={n_basis} agree to {agree} digits, upper bound {upper}")
    return CompareRow(
        k=k_value,
        rpm=rpm.value,
        rr=rr,
        agree_digits=agree,
        upper_bound=upper,
        published_digits=published_digits,
        digits=target_digits,
    )


def compare(
    target_digits: int = SOLVER_DIGITS,
    n_basis: int = RR_BASIS_MAX,
    precision: int | None = None,
    workers: int = SOLVER_WORKERS,
    benchmarks: BenchmarkSet | None = None,
) -> list[CompareRow]:
    """RPM against Rayleigh-Ritz at a fixed basis size for every Table 1 spring constant."""
    RrConfig(n_basis=n_basis)
    benchmarks = _load(benchmarks)
    dps = max(COMPARE_MIN_PRECISION, working_precision(target_digits, precision))
    jobs = [(row.k, target_digits, n_basis, dps, row.E0) for row in benchmarks.rows]
    return parallel_map(_compare_row, jobs, workers)


def compare_passed(rows: list[CompareRow]) -> bool:
    return all(row.agree_digits >= COMPARE_MIN_AGREEMENT and row.upper_bound for row in rows)


def harmonium_levels(
    k: Real,
    n_basis: int = RR_BASIS_MAX,
    levels: int = 1,
    target_digits: int = SOLVER_DIGITS,
    precision: int | None = None,
) -> list[LevelRow]:
    """Lowest Rayleigh-Ritz upper bounds for the relative s-levels and the matching E_i."""
    config = RrConfig(n_basis=n_basis, precision=working_precision(target_digits, precision))
    if not 1 <= levels <= n_basis:
        raise InvalidInput(f"levels must be in 1..{n_basis}, got {levels}")
    with mp.workdps(config.dps):
        k = _parse_k(k)
        scales = harmonium_reduce(HarmoniumModel(hbar=1, mass=1, charge=1, k=k))
        values = rr_spectrum(RadialProblem(scales.lam), config)
        return [
            LevelRow(
                index=i,
                eps=eps,
                energy=physical_energy(scales, eps, ModelKind.HARMONIUM),
                digits=target_digits,
            )
            for i, eps in enumerate(values[:levels])
        ]


@dataclass
class OscReport:
    lam: mpf
    spectrum: list[SpectrumRow]
    summary: VariationalSummary

    def to_record(self) -> dict[str, Any]:
        return {
            "lambda": format_real(self.lam, self.summary.digits),
            "spectrum": [row.to_record() for row in self.spectrum],
            "variational": self.summary.to_record(),
        }


def variational_summary(lam: Real, target_digits: int = SOLVER_DIGITS, precision: int | None = None) -> VariationalSummary:
    with mp.workdps(working_precision(target_digits, precision)):
        lam = check_bound(lam)
        point = solve_stationarity(lam)
        w = variational_energy(point, lam)
        error = abs(w - exact_ground(lam).value)
    return VariationalSummary(alpha=point.alpha, beta=point.beta, W=w, abs_error=error, digits=target_digits)


def osc_report(
    lam: Real | None = None,
    j_max: int = 1,
    n_max: int = 1,
    target_digits: int = SOLVER_DIGITS,
    precision: int | None = None,
    model: OscillatorModel | None = None,
) -> OscReport:
    """
    Exact levels eps_jn for j <= j_max, n <= n_max and the variational optimum.

    Given a physical `model` instead of `lam`, lambda = K/k and every row also
    carries E = hbar omega eps.
    """
    if (lam is None) == (model is None):
        raise InvalidInput("give either lambda or the physical oscillator parameters")
    if j_max < 0 or n_max < 0:
        raise InvalidInput(f"j_max and n_max must be non-negative, got {j_max}, {n_max}")

    with mp.workdps(working_precision(target_digits, precision)):
        scales = oscillator_reduce(model) if model is not None else None
        lam = check_bound(scales.lam if scales is not None else lam)
        spectrum = []
        for j in range(j_max + 1):
            for n in range(n_max + 1):
                eps = exact_eigenvalue(QuantumNumbers(j, n), lam)
                energy = physical_energy(scales, eps, ModelKind.OSCILLATOR) if scales is not None else None
                spectrum.append(SpectrumRow(j=j, n=n, eps=eps, energy=energy, digits=target_digits))
        summary = variational_summary(lam, target_digits, precision)
    return OscReport(lam=lam, spectrum=spectrum, summary=summary)
