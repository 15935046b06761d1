from dataclasses import dataclass
from enum import Enum

from mpmath import mp, mpf

from ..errors import InvalidInput

# Decimal strings are parsed at working precision; floats are taken as exact binaries.
Real = mpf | int | float | str


def _positive(name: str, value: Real) -> None:
    if not mp.mpf(value) > 0:
        raise InvalidInput(f"{name} must be positive, got {value}")


class ModelKind(str, Enum):
    OSCILLATOR = "oscillator"
    HARMONIUM = "harmonium"


@dataclass(frozen=True)
class OscillatorModel:
    """Two 1-D electrons bound harmonically (k) and repelling harmonically (K)."""
    hbar: Real
    mass: Real
    k: Real
    K: Real

    def __post_init__(self):
        _positive("hbar", self.hbar)
        _positive("mass", self.mass)
        _positive("k", self.k)
        if mp.mpf(self.K) < 0:
            raise InvalidInput(f"K must be non-negative, got {self.K}")


@dataclass(frozen=True)
class HarmoniumModel:
    """Two 3-D electrons bound harmonically (k) and repelling through Coulomb's law."""
    hbar: Real
    mass: Real
    charge: Real
    k: Real

    def __post_init__(self):
        _positive("hbar", self.hbar)
        _positive("mass", self.mass)
        _positive("charge", self.charge)
        _positive("k", self.k)


@dataclass(frozen=True)
class ScaleFactors:
    """Length and frequency units plus the single dimensionless coupling."""
    hbar: mpf
    length: mpf
    omega: mpf
    lam: mpf

    @property
    def energy_unit(self) -> mpf:
        return self.hbar * self.omega


@dataclass(frozen=True)
class QuantumNumbers:
    """j counts center-of-mass quanta, n relative-motion quanta."""
    j: int
    n: int

    def __post_init__(self):
        if self.j < 0 or self.n < 0:
            raise InvalidInput(f"quantum numbers must be non-negative, got ({self.j}, {self.n})")


@dataclass(frozen=True)
class NormalModePoint:
    Q: mpf
    q: mpf


@dataclass(frozen=True)
class VariationalPoint:
    """Exponents of the trial function exp[-alpha(q1^2 + q2^2) - beta(q1 - q2)^2]."""
    alpha: mpf
    beta: mpf

    @property
    def is_normalizable(self) -> bool:
        return self.alpha > 0 and self.alpha + 2 * self.beta > 0


@dataclass(frozen=True)
class RadialProblem:
    """Relative-motion s-wave problem H_q = -laplacian + q^2/4 + lam/q."""
    lam: Real

    def __post_init__(self):
        if mp.mpf(self.lam) < 0:
            raise InvalidInput(f"lambda must be non-negative, got {self.lam}")
