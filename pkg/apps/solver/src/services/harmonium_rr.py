"""
Rayleigh-Ritz upper bounds for the relative-motion s-states of the harmonium.

Basis f_j = q^j exp(-q^2/4), j = 0..N-1, with the radial measure q^2 dq.
Every matrix element reduces to the Gaussian moments
M(n) = integral_0^inf q^n exp(-q^2/2) dq, so the whole problem is analytic:

    S_ij = M(i+j+2)
    T_ij = i j M(i+j) - (i+j)/2 M(i+j+2) + M(i+j+4)/4
    V_ij = M(i+j+4)/4 + lam M(i+j+1)

The kinetic element is the integrated-by-parts form integral f_i' f_j' q^2 dq.
"""

import logging
from dataclasses import dataclass

from mpmath import mp, mpf

from ..config import RR_BASIS_MAX
from ..errors import InvalidInput
from ..models.physics import RadialProblem
from .numerics import SymMatrix, cholesky, jacobi_eigen, solve_lower

logger = logging.getLogger(__name__)


@dataclass
class RrConfig:
    """Basis size and working precision (None runs at the ambient mp.dps)."""
    n_basis: int
    precision: int | None = None

    def __post_init__(self):
        if not 1 <= self.n_basis <= RR_BASIS_MAX:
            raise InvalidInput(f"basis size must be in 1..{RR_BASIS_MAX}, got {self.n_basis}")

    @property
    def dps(self) -> int:
        return self.precision if self.precision is not None else mp.dps


@dataclass
class MomentTable:
    values: list[mpf]

    @classmethod
    def build(cls, n_max: int) -> "MomentTable":
        values = [mp.sqrt(mp.pi / 2), mp.one]
        for n in range(2, n_max + 1):
            values.append((n - 1) * values[n - 2])
        return cls(values[: n_max + 1])

    def __getitem__(self, n: int) -> mpf:
        return self.values[n]


def gaussian_moment(n: int) -> mpf:
    """M(n) = integral_0^inf q^n exp(-q^2/2) dq."""
    if n < 0:
        raise InvalidInput(f"moment order must be non-negative, got {n}")
    return MomentTable.build(n)[n]


def overlap_element(i: int, j: int, moments: MomentTable) -> mpf:
    return moments[i + j + 2]


def kinetic_element(i: int, j: int, moments: MomentTable) -> mpf:
    s = i + j
    return i * j * moments[s] - mp.mpf(s) / 2 * moments[s + 2] + moments[s + 4] / 4


def potential_element(i: int, j: int, lam: mpf, moments: MomentTable) -> mpf:
    s = i + j
    return moments[s + 4] / 4 + lam * moments[s + 1]


def rr_matrices(problem: RadialProblem, config: RrConfig) -> tuple[SymMatrix, SymMatrix]:
    """Overlap S and Hamiltonian H = T + V for the first N basis functions."""
    lam = mp.mpf(problem.lam)
    moments = MomentTable.build(2 * config.n_basis + 2)
    s = SymMatrix.from_function(config.n_basis, lambda i, j: overlap_element(i, j, moments))
    h = SymMatrix.from_function(
        config.n_basis,
        lambda i, j: kinetic_element(i, j, moments) + potential_element(i, j, lam, moments),
    )
    return s, h


def rr_spectrum(problem: RadialProblem, config: RrConfig) -> list[mpf]:
    """
    Ascending Rayleigh-Ritz eigenvalues of H c = eps S c.

    S = L L^T is factored and the symmetric L^-1 H L^-T is diagonalized.
    An ill-conditioned S surfaces as NotPositiveDefinite.
    """
    with mp.workdps(config.dps):
        s, h = rr_matrices(problem, config)
        lower = cholesky(s)
        half = solve_lower(lower, h.entries)
        half_t = [list(col) for col in zip(*half)]
        reduced = solve_lower(lower, half_t)
        n = config.n_basis
        sym = SymMatrix.from_function(n, lambda i, j: (reduced[i][j] + reduced[j][i]) / 2)
        values = jacobi_eigen(sym)
    logger.debug(f"RR N={config.n_basis} lambda={problem.lam}: lowest {mp.nstr(values[0], 20)}")
    return values


def rr_ground(problem: RadialProblem, n_basis: int, precision: int | None = None) -> mpf:
    """Lowest Rayleigh-Ritz bound for a basis of `n_basis` functions."""
    return rr_spectrum(problem, RrConfig(n_basis=n_basis, precision=precision))[0]

