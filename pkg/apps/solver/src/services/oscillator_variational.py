"""
Two-parameter Gaussian variational treatment of the coupled oscillator.

Trial function exp[-alpha (q1^2 + q2^2) - beta (q1 - q2)^2]; its energy
W(alpha, beta) is a rational function and the stationarity conditions,
after clearing denominators, are the polynomial pair returned by
stationarity_residuals.
"""

import logging

from mpmath import mp, mpf

from ..config import NEWTON_MAX_ITER
from ..errors import NoConvergence, NonMinimum, NotNormalizable
from ..models.physics import QuantumNumbers, Real, VariationalPoint
from .numerics import tolerance
from .oscillator_exact import check_bound, exact_eigenvalue

logger = logging.getLogger(__name__)

DEFAULT_INIT = VariationalPoint(alpha=mp.mpf(1), beta=mp.mpf(0))

# Offsets added to the initial point when a run ends on a rejected root
RESTART_LATTICE = (
    (mp.mpf("0.5"), mp.mpf(0)),
    (mp.mpf("-0.25"), mp.mpf(0)),
    (mp.mpf(0), mp.mpf("0.25")),
    (mp.mpf(0), mp.mpf("-0.125")),
    (mp.mpf(1), mp.mpf("0.5")),
    (mp.mpf("0.25"), mp.mpf("0.25")),
    (mp.mpf(2), mp.mpf(0)),
    (mp.mpf("-0.5"), mp.mpf("0.5")),
)


def _point(p: VariationalPoint) -> tuple[mpf, mpf]:
    return mp.mpf(p.alpha), mp.mpf(p.beta)


def variational_energy(p: VariationalPoint, lam: Real) -> mpf:
    """W = [4a^3 + 12a^2 b + a(8b^2 - lam + 1) + b] / [4a(a + 2b)]."""
    a, b = _point(p)
    lam = mp.mpf(lam)
    if not (a > 0 and a + 2 * b > 0):
        raise NotNormalizable(
            f"trial function with alpha = {mp.nstr(a, 10)}, beta = {mp.nstr(b, 10)} is not normalizable"
        )
    numerator = 4 * a ** 3 + 12 * a ** 2 * b + a * (8 * b ** 2 - lam + 1) + b
    return numerator / (4 * a * (a + 2 * b))


def stationarity_residuals(p: VariationalPoint, lam: Real) -> tuple[mpf, mpf]:
    a, b = _point(p)
    lam = mp.mpf(lam)
    r1 = 4 * a ** 4 + 16 * a ** 3 * b + a ** 2 * (16 * b ** 2 + lam - 1) - 2 * a * b - 2 * b ** 2
    r2 = 4 * a ** 2 + 16 * a * b + 16 * b ** 2 + 2 * lam - 1
    return r1, r2


def _residual_jacobian(a: mpf, b: mpf, lam: mpf) -> tuple[tuple[mpf, mpf], tuple[mpf, mpf]]:
    dr1_da = 16 * a ** 3 + 48 * a ** 2 * b + 2 * a * (16 * b ** 2 + lam - 1) - 2 * b
    dr1_db = 16 * a ** 3 + 32 * a ** 2 * b - 2 * a - 4 * b
    dr2_da = 8 * a + 16 * b
    dr2_db = 16 * a + 32 * b
    return (dr1_da, dr1_db), (dr2_da, dr2_db)


def optimal_point(lam: Real) -> VariationalPoint:
    """Closed-form minimizer alpha = 1/2, beta = (sqrt(1 - 2 lam) - 1) / 4."""
    lam = check_bound(lam)
    return VariationalPoint(alpha=mp.mpf(1) / 2, beta=(mp.sqrt(1 - 2 * lam) - 1) / 4)


def energy_hessian(p: VariationalPoint, lam: Real, step: Real | None = None) -> tuple[mpf, mpf, mpf]:
    """(W_aa, W_ab, W_bb) by central second differences."""
    a, b = _point(p)
    h = mp.mpf(10) ** (-(mp.dps // 4)) if step is None else mp.mpf(step)

    def w(da, db):
        return variational_energy(VariationalPoint(a + da, b + db), lam)

    center = w(0, 0)
    w_aa = (w(h, 0) - 2 * center + w(-h, 0)) / h ** 2
    w_bb = (w(0, h) - 2 * center + w(0, -h)) / h ** 2
    w_ab = (w(h, h) - w(h, -h) - w(-h, h) + w(-h, -h)) / (4 * h ** 2)
    return w_aa, w_ab, w_bb


def is_local_minimum(p: VariationalPoint, lam: Real) -> bool:
    """Positive-definite finite-difference Hessian and W not below the exact ground level."""
    w_aa, w_ab, w_bb = energy_hessian(p, lam)
    if not (w_aa > 0 and w_aa * w_bb - w_ab ** 2 > 0):
        return False
    floor = exact_eigenvalue(QuantumNumbers(0, 0), lam)
    return variational_energy(p, lam) >= floor - tolerance(10)


def _newton_2d(lam: mpf, start: VariationalPoint, tol: mpf, max_iter: int) -> VariationalPoint:
    a, b = _point(start)
    for iteration in range(1, max_iter + 1):
        r1, r2 = stationarity_residuals(VariationalPoint(a, b), lam)
        (j11, j12), (j21, j22) = _residual_jacobian(a, b, lam)
        det = j11 * j22 - j12 * j21
        if det == 0:
            raise NoConvergence(f"singular stationarity Jacobian at step {iteration}", best=VariationalPoint(a, b))
        da = (r1 * j22 - r2 * j12) / det
        db = (j11 * r2 - j21 * r1) / det
        a, b = a - da, b - db
        if max(abs(da), abs(db)) < tol:
            r1, r2 = stationarity_residuals(VariationalPoint(a, b), lam)
            if max(abs(r1), abs(r2)) < tol:
                logger.debug(f"stationarity Newton converged in {iteration} steps")
                return VariationalPoint(a, b)
    raise NoConvergence(f"stationarity Newton did not converge in {max_iter} steps", best=VariationalPoint(a, b))


def solve_stationarity(
    lam: Real,
    init: VariationalPoint = DEFAULT_INIT,
    tol: Real | None = None,
    max_iter: int = NEWTON_MAX_ITER,
) -> VariationalPoint:
    """
    Newton iteration on the stationarity residuals.

    Roots that are not normalizable or not minima are rejected and the run is
    restarted from the initial point shifted along RESTART_LATTICE.
    """
    lam = check_bound(lam)
    if not VariationalPoint(*_point(init)).is_normalizable:
        raise NotNormalizable(f"initial point {init} is not normalizable")
    tol = tolerance(10) if tol is None else mp.mpf(tol)

    a0, b0 = _point(init)
    starts = [(a0, b0)] + [(a0 + da, b0 + db) for da, db in RESTART_LATTICE]
    rejected = None
    failure = None

    for attempt, (a, b) in enumerate(starts):
        start = VariationalPoint(a, b)
        if not start.is_normalizable:
            continue
        try:
            point = _newton_2d(lam, start, tol, max_iter)
        except NoConvergence as e:
            failure = e
            logger.warning(f"variational start {attempt} did not converge: {e}")
            continue
        if not point.is_normalizable:
            logger.warning(f"variational start {attempt} reached a non-normalizable root, restarting")
            continue
        if is_local_minimum(point, lam):
            return point
        rejected = point
        logger.warning(f"variational start {attempt} reached a non-minimal stationary point, restarting")

    if rejected is not None:
        raise NonMinimum(
            f"only non-minimal stationary points found for lambda = {mp.nstr(lam, 10)}: {rejected}"
        )
    raise NoConvergence(
        f"no normalizable stationary point found for lambda = {mp.nstr(lam, 10)}",
        best=failure.best if failure else None,
    )
