import random

import pytest
from mpmath import mp

from src.errors import NotNormalizable, Unbound
from src.models.physics import QuantumNumbers, VariationalPoint
from src.services.oscillator_exact import exact_eigenvalue
from src.services.oscillator_variational import (
    energy_hessian,
    is_local_minimum,
    optimal_point,
    solve_stationarity,
    stationarity_residuals,
    variational_energy,
)


class TestVariationalEnergy:
    """W(alpha, beta) for the two-parameter Gaussian."""

    def test_uncoupled_unit_gaussian(self):
        """lam = 0, alpha = 1, beta = 0: two 1-D oscillators at 1/2 + 1/8 each."""
        assert variational_energy(VariationalPoint(mp.one, mp.zero), 0) == mp.mpf(5) / 4

    def test_exact_at_optimum(self):
        """At the closed-form optimum W equals eps_00."""
        for lam in ["0", "0.1", "0.375", "-0.4"]:
            point = optimal_point(lam)
            exact = exact_eigenvalue(QuantumNumbers(0, 0), lam)
            assert abs(variational_energy(point, lam) - exact) < mp.mpf(10) ** -45

    @pytest.mark.parametrize("alpha, beta", [(0, 0), ("-0.1", "0.3"), ("0.4", "-0.2"), ("0.4", "-0.3")])
    def test_not_normalizable(self, alpha, beta):
        """alpha <= 0 or alpha + 2 beta <= 0 has no finite norm."""
        with pytest.raises(NotNormalizable):
            variational_energy(VariationalPoint(mp.mpf(alpha), mp.mpf(beta)), "0.1")

    def test_residuals_vanish_at_optimum(self):
        """Both stationarity polynomials are zero at the closed form."""
        lam = mp.mpf("0.2")
        r1, r2 = stationarity_residuals(optimal_point(lam), lam)
        assert abs(r1) < mp.mpf(10) ** -45
        assert abs(r2) < mp.mpf(10) ** -45

    def test_residuals_match_energy_gradient(self):
        """dW/dalpha = 4 r1 / D^2 and dW/dbeta = 4 alpha^2 r2 / D^2 with D = 4 alpha (alpha + 2 beta)."""
        lam = mp.mpf("0.2")
        a, b = mp.mpf("0.8"), mp.mpf("0.1")
        r1, r2 = stationarity_residuals(VariationalPoint(a, b), lam)
        d2 = (4 * a * (a + 2 * b)) ** 2
        dw_da = mp.diff(lambda x: variational_energy(VariationalPoint(x, b), lam), a)
        dw_db = mp.diff(lambda y: variational_energy(VariationalPoint(a, y), lam), b)
        assert abs(dw_da - 4 * r1 / d2) < mp.mpf(10) ** -30
        assert abs(dw_db - 4 * a ** 2 * r2 / d2) < mp.mpf(10) ** -30

    def test_lower_bound_dominance(self):
        """No normalizable trial point falls below eps_00 (200 random points)."""
        rng = random.Random(20240513)
        for _ in range(200):
            lam = mp.mpf(rng.uniform(-1, 0.49))
            alpha = mp.mpf(rng.uniform(0.01, 3))
            beta = mp.mpf(rng.uniform(-alpha / 2 + 0.005, 3))
            w = variational_energy(VariationalPoint(alpha, beta), lam)
            assert w >= exact_eigenvalue(QuantumNumbers(0, 0), lam) - mp.mpf(10) ** -40


class TestOptimum:
    """Closed form and Newton solution of the stationarity system."""

    def test_three_eighths(self):
        """lam = 3/8: alpha = 0.5, beta = -0.125, W = 0.75."""
        point = solve_stationarity(mp.mpf(3) / 8)
        assert abs(point.alpha - mp.mpf("0.5")) < mp.mpf(10) ** -30
        assert abs(point.beta + mp.mpf("0.125")) < mp.mpf(10) ** -30
        assert abs(variational_energy(point, mp.mpf(3) / 8) - mp.mpf("0.75")) < mp.mpf(10) ** -30

    def test_lambda_grid(self):
        """From (1, 0) Newton lands on the closed form across 50 couplings in [0, 0.49]."""
        for i in range(50):
            lam = mp.mpf("0.49") * i / 49
            point = solve_stationarity(lam)
            closed = optimal_point(lam)
            assert abs(point.alpha - closed.alpha) < mp.mpf(10) ** -12
            assert abs(point.beta - closed.beta) < mp.mpf(10) ** -12
            exact = exact_eigenvalue(QuantumNumbers(0, 0), lam)
            assert abs(variational_energy(point, lam) - exact) / exact < mp.mpf(10) ** -14

    def test_optimum_is_minimum(self):
        """The Hessian is positive definite at the optimum."""
        lam = mp.mpf("0.3")
        point = optimal_point(lam)
        w_aa, w_ab, w_bb = energy_hessian(point, lam)
        assert w_aa > 0
        assert w_aa * w_bb - w_ab ** 2 > 0
        assert is_local_minimum(point, lam)

    def test_unbound(self):
        """lam = 1/2 is rejected before iterating."""
        with pytest.raises(Unbound):
            solve_stationarity(mp.mpf(1) / 2)
        with pytest.raises(Unbound):
            optimal_point("0.5")

    def test_non_normalizable_start(self):
        """The initial point must be normalizable."""
        with pytest.raises(NotNormalizable):
            solve_stationarity("0.1", init=VariationalPoint(mp.mpf(-1), mp.zero))

    def test_custom_start(self):
        """Other normalizable starts reach the same optimum."""
        lam = mp.mpf("0.25")
        point = solve_stationarity(lam, init=VariationalPoint(mp.mpf("0.3"), mp.mpf("0.2")))
        closed = optimal_point(lam)
        assert abs(point.alpha - closed.alpha) < mp.mpf(10) ** -30
        assert abs(point.beta - closed.beta) < mp.mpf(10) ** -30
