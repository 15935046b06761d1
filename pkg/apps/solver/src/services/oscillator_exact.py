"""
Exact solution of the dimensionless coupled oscillator

    H = -(d^2/dq1^2 + d^2/dq2^2)/2 + (q1^2 + q2^2)/2 - lam (q1 - q2)^2 / 2.

The orthogonal change of variables Q = (q1 + q2)/sqrt2, q = (q1 - q2)/sqrt2
splits H into a unit oscillator in Q and an oscillator of spring constant
1 - 2 lam in q, so bound states exist only for lam < 1/2.
"""

from mpmath import mp, mpf

from ..errors import Unbound
from ..models.physics import NormalModePoint, QuantumNumbers, Real
from ..models.results import EnergyResult, Method
from .numerics import tolerance


def check_bound(lam: Real) -> mpf:
    """lam itself if it binds; a coupling within rounding distance of 1/2 counts as 1/2."""
    lam = mp.mpf(lam)
    if lam >= mp.mpf(1) / 2 - tolerance(5):
        raise Unbound(lam)
    return lam


def relative_spring_constant(lam: Real) -> mpf:
    return 1 - 2 * check_bound(lam)


def exact_eigenvalue(qn: QuantumNumbers, lam: Real) -> mpf:
    """eps_jn = j + 1/2 + (n + 1/2) sqrt(1 - 2 lam)."""
    s = mp.sqrt(relative_spring_constant(lam))
    half = mp.mpf(1) / 2
    return qn.j + half + (qn.n + half) * s


def exact_ground(lam: Real) -> EnergyResult:
    """eps_00 in closed form, certified to mp.dps - 10 digits."""
    lam = check_bound(lam)
    return EnergyResult(
        value=exact_eigenvalue(QuantumNumbers(0, 0), lam),
        certified_digits=mp.dps - 10,
        method=Method.EXACT,
        lam=lam,
    )


def normal_modes(q1: Real, q2: Real) -> NormalModePoint:
    q1, q2 = mp.mpf(q1), mp.mpf(q2)
    r = mp.sqrt(2)
    return NormalModePoint(Q=(q1 + q2) / r, q=(q1 - q2) / r)


def electron_coordinates(point: NormalModePoint) -> tuple[mpf, mpf]:
    """Inverse of normal_modes (the map is its own inverse)."""
    r = mp.sqrt(2)
    return (point.Q + point.q) / r, (point.Q - point.q) / r


def hermite(n: int, x: mpf) -> mpf:
    """Physicists' Hermite polynomial by the three-term recurrence."""
    previous, current = mp.one, 2 * x
    if n == 0:
        return previous
    for m in range(1, n):
        previous, current = current, 2 * x * current - 2 * m * previous
    return current


def oscillator_function(n: int, k: Real, u: Real) -> mpf:
    """
    Normalized eigenfunction n of -(1/2) d^2/du^2 + (k/2) u^2.

    N_n H_n(k^(1/4) u) exp(-sqrt(k) u^2 / 2), N_n = (k^(1/4) / (2^n n! sqrt(pi)))^(1/2).
    """
    k, u = mp.mpf(k), mp.mpf(u)
    scale = mp.root(k, 4)
    norm = mp.sqrt(scale / (2 ** n * mp.factorial(n) * mp.sqrt(mp.pi)))
    return norm * hermite(n, scale * u) * mp.exp(-mp.sqrt(k) * u ** 2 / 2)


def eigenfunction_value(qn: QuantumNumbers, lam: Real, q1: Real, q2: Real) -> mpf:
    """psi_jn(q1, q2) = phi_j(1, Q) * phi_n(1 - 2 lam, q)."""
    k_rel = relative_spring_constant(lam)
    point = normal_modes(q1, q2)
    return oscillator_function(qn.j, 1, point.Q) * oscillator_function(qn.n, k_rel, point.q)


def hamiltonian_residual(qn: QuantumNumbers, lam: Real, q1: Real, q2: Real, step: Real = "1e-4") -> mpf:
    """
    (H psi - eps psi) / psi at one point, H applied by central second differences.

    A direct check that eigenfunction_value and exact_eigenvalue belong together.
    """
    lam, q1, q2, h = mp.mpf(lam), mp.mpf(q1), mp.mpf(q2), mp.mpf(step)

    def psi(a, b):
        return eigenfunction_value(qn, lam, a, b)

    center = psi(q1, q2)
    d2_q1 = (psi(q1 + h, q2) - 2 * center + psi(q1 - h, q2)) / h ** 2
    d2_q2 = (psi(q1, q2 + h) - 2 * center + psi(q1, q2 - h)) / h ** 2
    potential = (q1 ** 2 + q2 ** 2) / 2 - lam * (q1 - q2) ** 2 / 2
    h_psi = -(d2_q1 + d2_q2) / 2 + potential * center
    return (h_psi - exact_eigenvalue(qn, lam) * center) / center
