"""
Dimensionless reduction of the two physical models.

Both models measure lengths in L = hbar^(1/2) / (m k)^(1/4) and energies in
hbar * omega with omega = sqrt(k / m); what is left is one coupling lambda.
Units are documented, not enforced: every input is taken in one consistent
system.
"""

from mpmath import mp, mpf

from ..models.physics import HarmoniumModel, ModelKind, OscillatorModel, Real, ScaleFactors

# Center-of-mass zero-point energy of the 3-D harmonium, in units of hbar*omega
CENTER_OF_MASS_ENERGY = mp.mpf(3) / 2


def _common_scales(hbar: mpf, mass: mpf, k: mpf) -> tuple[mpf, mpf]:
    length = mp.sqrt(hbar) / mp.root(mass * k, 4)
    omega = mp.sqrt(k / mass)
    return length, omega


def oscillator_reduce(model: OscillatorModel) -> ScaleFactors:
    """Scales of the coupled oscillator; lambda = K / k."""
    hbar, mass, k, K = (mp.mpf(x) for x in (model.hbar, model.mass, model.k, model.K))
    length, omega = _common_scales(hbar, mass, k)
    return ScaleFactors(hbar=hbar, length=length, omega=omega, lam=K / k)


def harmonium_reduce(model: HarmoniumModel) -> ScaleFactors:
    """Scales of the harmonium; lambda = m^(3/4) e^2 hbar^(-3/2) k^(-1/4)."""
    hbar, mass, charge, k = (mp.mpf(x) for x in (model.hbar, model.mass, model.charge, model.k))
    length, omega = _common_scales(hbar, mass, k)
    lam = mass ** (mp.mpf(3) / 4) * charge ** 2 / (hbar * mp.sqrt(hbar)) / mp.root(k, 4)
    return ScaleFactors(hbar=hbar, length=length, omega=omega, lam=lam)


def spring_constant_for(lam: Real, hbar: Real = 1, mass: Real = 1, charge: Real = 1) -> mpf:
    """Harmonium spring constant k whose reduced coupling is `lam`."""
    hbar, mass, charge, lam = (mp.mpf(x) for x in (hbar, mass, charge, lam))
    return (mass ** (mp.mpf(3) / 4) * charge ** 2 / (hbar * mp.sqrt(hbar)) / lam) ** 4


def physical_energy(scales: ScaleFactors, eps: Real, model_kind: ModelKind) -> mpf:
    """
    Convert a dimensionless eigenvalue back to an energy.

    For the harmonium `eps` is the relative-motion eigenvalue and the 3/2
    center-of-mass zero-point term is added here.
    """
    eps = mp.mpf(eps)
    if model_kind is ModelKind.HARMONIUM:
        return scales.energy_unit * (CENTER_OF_MASS_ENERGY + eps)
    return scales.energy_unit * eps
