"""
Arbitrary-precision kernels shared by every solver.

Values are mpmath ``mpf`` numbers and all routines run at the ambient
``mp.dps`` (the working precision P). Callers pick P with ``mp.workdps``;
nothing here changes it except the Jacobi solver, which adds guard digits
internally and rounds its results back to P.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from mpmath import mp, mpf
from mpmath.calculus.quadrature import GaussLegendre

from ..config import JACOBI_MAX_SWEEPS, MIN_PRECISION, NEWTON_MAX_ITER, QUAD_MAX_DEPTH
from ..errors import (
    InvalidInput,
    IterationLimit,
    NoConvergence,
    NoSignChange,
    NotPositiveDefinite,
    ToleranceNotReached,
)

logger = logging.getLogger(__name__)

BigReal = mpf
Rows = list[list[mpf]]

JACOBI_GUARD_DIGITS = 10

# Panel rules: 24 and 48 Gauss-Legendre nodes
_COARSE_DEGREE = 4
_FINE_DEGREE = 5
_gauss_legendre = GaussLegendre(mp)


def working_precision(target_digits: int, precision: int | None = None) -> int:
    """Working precision P for a run certifying `target_digits` digits."""
    if target_digits < 1:
        raise InvalidInput(f"target digits must be positive, got {target_digits}")
    if precision is None:
        return max(MIN_PRECISION, 3 * target_digits)
    if precision < 3 * target_digits:
        raise InvalidInput(
            f"precision {precision} is below 3 x target digits ({3 * target_digits})"
        )
    return precision


def tolerance(offset: int = 0) -> mpf:
    """10^(-P + offset) at the ambient precision."""
    return mp.mpf(10) ** (offset - mp.dps)


@dataclass
class SymMatrix:
    """Dense symmetric matrix of mpf entries, stored row-major."""
    entries: Rows

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise InvalidInput("SymMatrix needs a non-empty square array")
        for i in range(n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InvalidInput(f"entries ({i},{j}) and ({j},{i}) differ")

    @classmethod
    def from_function(cls, order: int, element: Callable[[int, int], mpf]) -> "SymMatrix":
        """Build from element(i, j) evaluated on the lower triangle and mirrored."""
        entries = [[mp.zero] * order for _ in range(order)]
        for i in range(order):
            for j in range(i + 1):
                entries[i][j] = entries[j][i] = mp.mpf(element(i, j))
        return cls(entries)

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: tuple[int, int]) -> mpf:
        i, j = index
        return self.entries[i][j]

    def trace(self) -> mpf:
        return mp.fsum(self.entries[i][i] for i in range(self.order))


def _rows(m) -> Rows:
    """Fresh row-major copy of a SymMatrix, mpmath matrix or nested sequence."""
    if isinstance(m, SymMatrix):
        return [list(row) for row in m.entries]
    if hasattr(m, "cols"):
        return [[m[i, j] for j in range(m.cols)] for i in range(m.rows)]
    return [[mp.mpf(x) for x in row] for row in m]


def _check_square(a: Rows, name: str) -> int:
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise InvalidInput(f"{name} needs a non-empty square matrix")
    return n


def det_lu(m, scale_rows: bool = False) -> mpf:
    """
    Determinant by Gaussian elimination with partial pivoting.

    With `scale_rows` every row is first divided by its largest absolute
    entry. The result then differs from the true determinant by a positive
    factor, so zeros and signs are unchanged.
    """
    a = _rows(m)
    n = _check_square(a, "det_lu")

    if scale_rows:
        for row in a:
            largest = max(abs(x) for x in row)
            if largest == 0:
                return mp.zero
            row[:] = [x / largest for x in row]

    det = mp.one
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0:
            return mp.zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor:
                row, top = a[r], a[col]
                for c in range(col + 1, n):
                    row[c] -= factor * top[c]
    return det


def cholesky(m) -> Rows:
    """Lower-triangular L with L * L^T = m. Only the lower triangle of m is read."""
    a = _rows(m)
    n = _check_square(a, "cholesky")
    lower = [[mp.zero] * n for _ in range(n)]

    for j in range(n):
        pivot = a[j][j] - mp.fsum(lower[j][k] ** 2 for k in range(j))
        if pivot <= 0:
            raise NotPositiveDefinite(
                f"Cholesky pivot {j} of {n} is {mp.nstr(pivot, 5)} at {mp.dps} digits"
            )
        lower[j][j] = mp.sqrt(pivot)
        for i in range(j + 1, n):
            lower[i][j] = (a[i][j] - mp.fsum(lower[i][k] * lower[j][k] for k in range(j))) / lower[j][j]
    return lower


def solve_lower(lower: Rows, rhs: Rows) -> Rows:
    """Forward substitution: X with lower * X = rhs (rhs given row-major)."""
    n = len(lower)
    cols = len(rhs[0])
    x = [[mp.zero] * cols for _ in range(n)]
    for i in range(n):
        row = lower[i]
        for c in range(cols):
            x[i][c] = (rhs[i][c] - mp.fsum(row[k] * x[k][c] for k in range(i))) / row[i]
    return x


def jacobi_eigensystem(m, max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[list[mpf], Rows]:
    """
    Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns ascending eigenvalues and the matching orthonormal eigenvectors as
    the columns of a row-major matrix, so m = Q * diag(values) * Q^T.
    """
    outer_dps = mp.dps
    with mp.workdps(outer_dps + JACOBI_GUARD_DIGITS):
        a = _rows(m)
        n = _check_square(a, "jacobi_eigen")
        v = [[mp.one if i == j else mp.zero for j in range(n)] for i in range(n)]

        norm = mp.sqrt(mp.fsum(x ** 2 for row in a for x in row))
        threshold = norm * mp.mpf(10) ** (5 - outer_dps)

        for sweep in range(max_sweeps + 1):
            off = mp.sqrt(mp.fsum(a[i][j] ** 2 for i in range(n) for j in range(n) if i != j))
            if off <= threshold:
                logger.debug(f"Jacobi converged after {sweep} sweeps (order {n})")
                break
            if sweep == max_sweeps:
                raise IterationLimit(
                    f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {mp.nstr(off, 5)})"
                )
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p][q]
                    if apq == 0:
                        continue
                    theta = (a[q][q] - a[p][p]) / (2 * apq)
                    t = 1 / (abs(theta) + mp.sqrt(theta ** 2 + 1))
                    if theta < 0:
                        t = -t
                    c = 1 / mp.sqrt(t ** 2 + 1)
                    s = t * c
                    for k in range(n):
                        akp, akq = a[k][p], a[k][q]
                        a[k][p] = c * akp - s * akq
                        a[k][q] = s * akp + c * akq
                    for k in range(n):
                        apk, aqk = a[p][k], a[q][k]
                        a[p][k] = c * apk - s * aqk
                        a[q][k] = s * apk + c * aqk
                    a[p][q] = a[q][p] = mp.zero
                    for k in range(n):
                        vkp, vkq = v[k][p], v[k][q]
                        v[k][p] = c * vkp - s * vkq
                        v[k][q] = s * vkp + c * vkq

        order = sorted(range(n), key=lambda i: a[i][i])

    values = [+a[i][i] for i in order]
    vectors = [[+v[r][i] for i in order] for r in range(n)]
    return values, vectors


def jacobi_eigen(m, max_sweeps: int = JACOBI_MAX_SWEEPS) -> list[mpf]:
    """Ascending eigenvalues of a symmetric matrix."""
    values, _ = jacobi_eigensystem(m, max_sweeps)
    return values


def central_difference(f: Callable[[mpf], mpf], x: mpf, step: mpf) -> mpf:
    return (f(x + step) - f(x - step)) / (2 * step)


def newton_root(
    f: Callable[[mpf], mpf],
    x0,
    tol,
    bracket: Sequence | None = None,
    *,
    df: Callable[[mpf], mpf] | None = None,
    step=None,
    max_iter: int = NEWTON_MAX_ITER,
    history: list | None = None,
) -> mpf:
    """
    Newton iteration with an optional bisection safeguard.

    Without `df` the derivative is a central difference with `step`
    (default 10^(-P/2)). With a `bracket` the iterate never leaves it: a
    Newton step that would, or one taken with a vanishing derivative, is
    replaced by bisection. Stops when |dx| < tol.
    """
    x = mp.mpf(x0)
    tol = mp.mpf(tol)
    h = mp.mpf(10) ** (-(mp.dps // 2)) if step is None else mp.mpf(step)
    slope_of = df if df is not None else (lambda u: central_difference(f, u, h))

    lo = hi = None
    if bracket is not None:
        lo, hi = sorted((mp.mpf(bracket[0]), mp.mpf(bracket[1])))
        f_lo, f_hi = f(lo), f(hi)
        if f_lo == 0:
            return lo
        if f_hi == 0:
            return hi
        if mp.sign(f_lo) == mp.sign(f_hi):
            raise NoSignChange(
                f"f has the same sign at {mp.nstr(lo, 10)} and {mp.nstr(hi, 10)}"
            )
        if not lo < x < hi:
            x = (lo + hi) / 2

    tiny = mp.mpf(10) ** (-mp.dps)
    for iteration in range(1, max_iter + 1):
        fx = f(x)
        if fx == 0:
            return x
        if lo is not None:
            if mp.sign(fx) == mp.sign(f_lo):
                lo, f_lo = x, fx
            else:
                hi = x

        slope = slope_of(x)
        x_new = x - fx / slope if abs(slope) > tiny * abs(fx) else None

        if lo is not None and (x_new is None or not lo < x_new < hi):
            x_new = (lo + hi) / 2
            logger.debug(f"Newton step {iteration} left the bracket, bisecting")
        elif x_new is None:
            raise NoConvergence(f"derivative vanished at x = {mp.nstr(x, 15)}", best=x)

        delta = abs(x_new - x)
        x = x_new
        if history is not None:
            history.append(x)
        if delta < tol or (lo is not None and hi - lo < tol):
            return x

    raise NoConvergence(f"Newton iteration did not converge in {max_iter} steps", best=x)


def _panel(f: Callable[[mpf], mpf], a: mpf, b: mpf, degree: int) -> mpf:
    nodes = _gauss_legendre.get_nodes(a, b, degree, mp.prec)
    return mp.fsum(w * f(x) for x, w in nodes)


def quadrature(f: Callable[[mpf], mpf], a, b, tol=None, *, max_depth: int = QUAD_MAX_DEPTH) -> mpf:
    """
    Adaptive Gauss-Legendre integral of a smooth f over [a, b].

    A panel is accepted when its 24- and 48-point estimates agree to its
    share of `tol`; otherwise it is halved. Infinite ranges must be truncated
    by the caller.
    """
    a, b = mp.mpf(a), mp.mpf(b)
    tol = tolerance(10) if tol is None else mp.mpf(tol)
    if a == b:
        return mp.zero

    width = abs(b - a)
    accepted = []
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        coarse = _panel(f, lo, hi, _COARSE_DEGREE)
        fine = _panel(f, lo, hi, _FINE_DEGREE)
        if abs(fine - coarse) <= tol * abs(hi - lo) / width:
            accepted.append(fine)
            continue
        if depth >= max_depth:
            raise ToleranceNotReached(
                f"quadrature panel [{mp.nstr(lo, 8)}, {mp.nstr(hi, 8)}] still off by "
                f"{mp.nstr(abs(fine - coarse), 5)} after {max_depth} halvings"
            )
        mid = (lo + hi) / 2
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return mp.fsum(accepted)
