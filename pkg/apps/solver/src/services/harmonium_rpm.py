"""
Riccati-Pade eigensolver for the relative-motion s-states of the harmonium,

    H_q = -laplacian + q^2/4 + lam/q.

With u(q) = q psi(q) the regularized logarithmic derivative
f(q) = 1/q - u'/u solves

    f' + 2f/q - f^2 + q^2/4 + lam/q - eps = 0,

whose power series f = sum_j f_j q^j follows from f_0 = -lam/2 and

    f_{j+1} = [sum_{i<=j} f_i f_{j-i} + eps delta_{j0} - delta_{j2}/4] / (j + 3).

The quantization condition is the vanishing of the Hankel determinants
H_D^d(eps) = det[f_{i+j+d}], i, j = 1..D. Their roots converge to the
eigenvalues as D grows; the ground-state root is followed from order to
order and certified by inter-order agreement.
"""

import logging
from dataclasses import dataclass, field

from mpmath import mp, mpf

from ..config import RPM_D_MAX, RPM_D_MIN, RPM_DISPLACEMENT, RPM_GUESS_BASIS, SOLVER_DIGITS
from ..errors import InvalidInput, NoConvergence, NoSignChange, RootLost, SeriesTooShort
from ..models.physics import RadialProblem, Real
from ..models.results import EnergyResult, Method
from .harmonium_rr import rr_ground
from .numerics import Rows, det_lu, newton_root, working_precision

logger = logging.getLogger(__name__)

# Relative move allowed for the first tracked root; later orders allow
# max(10 x last inter-order difference, BRANCH_FLOOR)
FIRST_ORDER_WINDOW = mp.mpf("0.1")
BRANCH_FLOOR = mp.mpf("1e-3")


@dataclass
class RpmConfig:
    d: int = RPM_DISPLACEMENT
    d_min: int = RPM_D_MIN
    d_max: int = RPM_D_MAX
    target_digits: int = SOLVER_DIGITS
    precision: int | None = None
    guess_basis: int = RPM_GUESS_BASIS

    def __post_init__(self):
        if self.d < 0:
            raise InvalidInput(f"Hankel displacement must be non-negative, got {self.d}")
        if self.d_min < 2:
            raise InvalidInput(f"minimum Hankel order must be at least 2, got {self.d_min}")
        if self.d_max < self.d_min:
            raise InvalidInput(f"Hankel order range {self.d_min}..{self.d_max} is empty")
        self.precision = working_precision(self.target_digits, self.precision)


@dataclass
class RiccatiSeries:
    lam: mpf
    eps: mpf
    coeffs: list[mpf] = field(default_factory=list)
    dcoeffs: list[mpf] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def riccati_series(problem: RadialProblem, eps: Real, J: int) -> RiccatiSeries:
    """Coefficients f_0..f_J and their eps-derivatives."""
    if J < 1:
        raise InvalidInput(f"series order must be at least 1, got {J}")
    lam, eps = mp.mpf(problem.lam), mp.mpf(eps)
    quarter = mp.mpf(1) / 4

    f = [-lam / 2]
    df = [mp.zero]
    for j in range(J):
        total = mp.fsum(f[i] * f[j - i] for i in range(j + 1))
        dtotal = 2 * mp.fsum(f[i] * df[j - i] for i in range(j + 1))
        if j == 0:
            total += eps
            dtotal += 1
        elif j == 2:
            total -= quarter
        f.append(total / (j + 3))
        df.append(dtotal / (j + 3))
    return RiccatiSeries(lam=lam, eps=eps, coeffs=f, dcoeffs=df)


def hankel_matrix(series: RiccatiSeries, D: int, d: int) -> Rows:
    if D < 1 or d < 0:
        raise InvalidInput(f"invalid Hankel order D={D}, displacement d={d}")
    if series.order < 2 * D + d:
        raise SeriesTooShort(f"H_{D}^{d} needs f_{2 * D + d}, series stops at f_{series.order}")
    return [[series.coeffs[i + j + d] for j in range(1, D + 1)] for i in range(1, D + 1)]


def hankel_determinant(series: RiccatiSeries, D: int, d: int = 0, scaled: bool = False) -> mpf:
    """
    H_D^d = det[f_{i+j+d}], i, j = 1..D.

    `scaled` applies the row-scaling guard; the value then changes by a
    positive factor but its zeros in eps do not.
    """
    return det_lu(hankel_matrix(series, D, d), scale_rows=scaled)


def certified_digits(rel_diff: mpf, precision: int) -> int:
    """floor(-log10(last relative inter-order difference)) - 2, capped by the working precision."""
    floor = mp.mpf(10) ** (-precision)
    digits = int(mp.floor(-mp.log10(max(rel_diff, floor)))) - 2
    return min(digits, precision - 10)


def _track_root(h, order: int, previous: mpf, diffs: list[mpf], tol: mpf, step: mpf) -> mpf:
    """Root of H_D nearest `previous`; one bisection retry if Newton leaves the branch."""
    window = FIRST_ORDER_WINDOW if not diffs else max(10 * diffs[-1], BRANCH_FLOOR)
    half_width = max(window * abs(previous), 10 * tol)
    try:
        root = newton_root(h, previous, tol, step=step)
        if abs(root - previous) > half_width:
            raise RootLost(
                f"order {order}: Newton moved from {mp.nstr(previous, 15)} to {mp.nstr(root, 15)}"
            )
        return root
    except NoConvergence as e:
        logger.warning(f"RPM {e}; retrying in bracket +/- {mp.nstr(half_width, 5)}")
        try:
            return newton_root(h, previous, tol, bracket=(previous - half_width, previous + half_width), step=step)
        except (NoSignChange, NoConvergence) as retry_error:
            raise RootLost(
                f"RPM lost the ground-state root at order {order} near {mp.nstr(previous, 15)}",
                best=previous,
            ) from retry_error


def rpm_ground(problem: RadialProblem, config: RpmConfig | None = None, guess: Real | None = None) -> EnergyResult:
    """
    Ground-state eigenvalue of H_q by Riccati-Pade root tracking.

    The first guess defaults to a small Rayleigh-Ritz calculation so that the
    tracked root belongs to the ground state rather than an excited s-level.
    Stops once two consecutive inter-order relative differences fall below
    10^-(target_digits + 2).
    """
    config = config or RpmConfig()
    with mp.workdps(config.precision):
        lam = mp.mpf(problem.lam)
        if guess is None:
            guess = rr_ground(problem, config.guess_basis)
            logger.debug(f"RPM lambda={problem.lam}: Rayleigh-Ritz N={config.guess_basis} guess {mp.nstr(guess, 15)}")
        previous = mp.mpf(guess)

        tol = mp.mpf(10) ** (-min(config.target_digits + 10, config.precision - 10))
        step = mp.mpf(10) ** (-(config.precision // 2))
        threshold = mp.mpf(10) ** (-(config.target_digits + 2))

        roots: list[tuple[int, mpf]] = []
        diffs: list[mpf] = []
        for order in range(config.d_min, config.d_max + 1):
            length = 2 * order + config.d

            def h(eps, order=order, length=length):
                return hankel_determinant(riccati_series(problem, eps, length), order, config.d, scaled=True)

            try:
                root = _track_root(h, order, previous, diffs, tol, step)
            except RootLost:
                if roots:
                    raise
                logger.warning(f"RPM D={order}: no root near the starting guess yet, moving to D={order + 1}")
                continue
            if roots:
                diffs.append(abs(root - roots[-1][1]) / abs(root))
            roots.append((order, root))
            previous = root
            logger.debug(f"RPM lambda={problem.lam} D={order}: {mp.nstr(root, 25)}")

            if len(diffs) >= 2 and diffs[-1] < threshold and diffs[-2] < threshold:
                digits = certified_digits(diffs[-1], config.precision)
                logger.info(f"RPM lambda={mp.nstr(lam, 12)} certified {digits} digits at D={order}")
                return EnergyResult(
                    value=root,
                    certified_digits=digits,
                    method=Method.RPM,
                    orders_used=roots,
                    lam=lam,
                )

    raise NoConvergence(
        f"RPM did not certify {config.target_digits} digits by D={config.d_max} "
        f"(last relative difference {mp.nstr(diffs[-1], 5) if diffs else 'n/a'})",
        best=roots[-1][1] if roots else previous,
    )
