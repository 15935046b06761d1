import random

import pytest
from mpmath import mp

from src.errors import (
    InvalidInput,
    IterationLimit,
    NoConvergence,
    NoSignChange,
    NotPositiveDefinite,
    ToleranceNotReached,
)
from src.services.numerics import (
    SymMatrix,
    cholesky,
    det_lu,
    jacobi_eigen,
    jacobi_eigensystem,
    newton_root,
    quadrature,
    solve_lower,
    tolerance,
    working_precision,
)


def hilbert(n):
    return [[mp.one / (i + j + 1) for j in range(n)] for i in range(n)]


class TestWorkingPrecision:
    """Precision is at least 50 digits and three times the target."""

    def test_default_floor(self):
        """Small targets still run at 50 digits."""
        assert working_precision(10) == 50

    def test_default_triples_target(self):
        """Large targets run at 3 x digits."""
        assert working_precision(18) == 54
        assert working_precision(25) == 75

    def test_explicit_precision_kept(self):
        """An explicit precision at or above 3 x digits is used as given."""
        assert working_precision(18, 80) == 80

    def test_precision_below_triple_target(self):
        """A precision that cannot carry the target is rejected."""
        with pytest.raises(InvalidInput):
            working_precision(18, 40)

    def test_non_positive_target(self):
        """Zero target digits is invalid."""
        with pytest.raises(InvalidInput):
            working_precision(0)

    def test_tolerance_follows_ambient_precision(self):
        """tolerance(offset) is 10^(offset - dps)."""
        assert tolerance() == mp.mpf(10) ** -50
        assert tolerance(10) == mp.mpf(10) ** -40


class TestSymMatrix:
    """Symmetric container checks."""

    def test_rejects_asymmetric(self):
        """Entries that differ across the diagonal are refused."""
        with pytest.raises(InvalidInput):
            SymMatrix([[mp.one, mp.mpf(2)], [mp.mpf(3), mp.one]])

    def test_rejects_ragged(self):
        """Non-square arrays are refused."""
        with pytest.raises(InvalidInput):
            SymMatrix([[mp.one, mp.one]])

    def test_from_function_mirrors_lower_triangle(self):
        """element(i, j) is only evaluated for j <= i."""
        calls = []

        def element(i, j):
            calls.append((i, j))
            return i + j

        m = SymMatrix.from_function(3, element)
        assert all(j <= i for i, j in calls)
        assert m[0, 2] == m[2, 0] == 2
        assert m.trace() == 0 + 2 + 4


class TestDetLu:
    """Determinants by pivoted elimination."""

    def test_two_by_two(self):
        """det [[2,1],[1,3]] = 5."""
        assert det_lu([[2, 1], [1, 3]]) == 5

    def test_row_swap_changes_sign(self):
        """A pure permutation has determinant -1."""
        assert det_lu([[0, 1], [1, 0]]) == -1

    def test_singular_is_zero(self):
        """Linearly dependent rows give exactly zero."""
        assert det_lu([[1, 2], [2, 4]]) == 0

    def test_hilbert(self):
        """det of the 3 x 3 Hilbert matrix is 1/2160."""
        assert abs(det_lu(hilbert(3)) - mp.mpf(1) / 2160) < mp.mpf(10) ** -45

    def test_scaling_keeps_sign_and_zeros(self):
        """Row scaling changes the value by a positive factor only."""
        m = [[mp.mpf("1e-30"), 2], [3, mp.mpf("5e20")]]
        assert mp.sign(det_lu(m, scale_rows=True)) == mp.sign(det_lu(m))
        assert det_lu([[0, 0], [1, 2]], scale_rows=True) == 0

    def test_accepts_mpmath_matrix(self):
        """mp.matrix input is read element by element."""
        assert det_lu(mp.matrix([[4, 1], [2, 3]])) == 10


class TestCholesky:
    """Cholesky factor and forward substitution."""

    def test_factor(self):
        """[[4,2],[2,3]] = L L^T with L = [[2,0],[1,sqrt2]]."""
        lower = cholesky([[4, 2], [2, 3]])
        assert lower[0][0] == 2
        assert lower[1][0] == 1
        assert abs(lower[1][1] - mp.sqrt(2)) < mp.mpf(10) ** -48
        assert lower[0][1] == 0

    def test_indefinite(self):
        """A negative pivot raises NotPositiveDefinite."""
        with pytest.raises(NotPositiveDefinite):
            cholesky([[1, 2], [2, 1]])

    def test_reconstructs_hilbert(self):
        """L L^T reproduces a positive-definite matrix."""
        h = hilbert(5)
        lower = cholesky(h)
        for i in range(5):
            for j in range(5):
                value = mp.fsum(lower[i][k] * lower[j][k] for k in range(5))
                assert abs(value - h[i][j]) < mp.mpf(10) ** -45

    def test_solve_lower(self):
        """Forward substitution against a known right-hand side."""
        lower = [[mp.mpf(2), mp.zero], [mp.one, mp.mpf(4)]]
        x = solve_lower(lower, [[mp.mpf(2), mp.mpf(4)], [mp.mpf(9), mp.mpf(2)]])
        assert x == [[1, 2], [2, 0]]


class TestJacobi:
    """Cyclic Jacobi symmetric eigensolver."""

    def test_two_by_two(self):
        """[[2,1],[1,2]] has eigenvalues 1 and 3, ascending."""
        values = jacobi_eigen([[2, 1], [1, 2]])
        assert abs(values[0] - 1) < mp.mpf(10) ** -48
        assert abs(values[1] - 3) < mp.mpf(10) ** -48

    def test_diagonal_untouched(self):
        """A diagonal matrix needs no rotation; values come back sorted."""
        assert jacobi_eigen([[3, 0, 0], [0, 1, 0], [0, 0, 2]]) == [1, 2, 3]

    def test_eigensystem_reconstructs(self):
        """Q diag(values) Q^T rebuilds the Hilbert matrix and Q is orthonormal."""
        h = hilbert(6)
        values, q = jacobi_eigensystem(h)
        for i in range(6):
            for j in range(6):
                rebuilt = mp.fsum(q[i][k] * values[k] * q[j][k] for k in range(6))
                assert abs(rebuilt - h[i][j]) < mp.mpf(10) ** -40
                dot = mp.fsum(q[k][i] * q[k][j] for k in range(6))
                assert abs(dot - (1 if i == j else 0)) < mp.mpf(10) ** -40

    def test_trace_preserved(self):
        """Sum of eigenvalues equals the trace."""
        m = SymMatrix.from_function(8, lambda i, j: mp.mpf(1) / (1 + abs(i - j)) + (i == j) * i)
        assert abs(mp.fsum(jacobi_eigen(m)) - m.trace()) < mp.mpf(10) ** -40

    def test_sweep_limit(self):
        """Zero allowed sweeps on a non-diagonal matrix raises IterationLimit."""
        with pytest.raises(IterationLimit):
            jacobi_eigen([[2, 1], [1, 2]], max_sweeps=0)


class TestNewtonRoot:
    """Newton iteration with bisection safeguard."""

    def test_square_root(self):
        """x^2 - 2 from x0 = 1 converges to sqrt(2)."""
        root = newton_root(lambda x: x ** 2 - 2, 1, mp.mpf(10) ** -45)
        assert abs(root - mp.sqrt(2)) < mp.mpf(10) ** -44

    def test_analytic_derivative(self):
        """A supplied derivative is used instead of differences."""
        history = []
        root = newton_root(lambda x: x ** 3 - 8, 3, mp.mpf(10) ** -45, df=lambda x: 3 * x ** 2, history=history)
        assert abs(root - 2) < mp.mpf(10) ** -44
        assert 0 < len(history) < 20

    def test_bracketed_transcendental(self):
        """cos x = x inside [0, 1]."""
        root = newton_root(lambda x: mp.cos(x) - x, mp.mpf("0.5"), mp.mpf(10) ** -40, bracket=(0, 1))
        assert abs(mp.cos(root) - root) < mp.mpf(10) ** -38

    def test_no_sign_change(self):
        """A bracket without a sign change is rejected."""
        with pytest.raises(NoSignChange):
            newton_root(lambda x: x ** 2 + 1, 0, mp.mpf(10) ** -20, bracket=(-1, 1))

    def test_flat_derivative_falls_back_to_bisection(self):
        """The triple root of (x - 1)^3 is still found inside a bracket."""
        root = newton_root(lambda x: (x - 1) ** 3, 3, mp.mpf(10) ** -12, bracket=(0, 3))
        assert abs(root - 1) < mp.mpf(10) ** -8

    def test_bracket_endpoint_root(self):
        """A root sitting on the bracket edge is returned directly."""
        assert newton_root(lambda x: x - 2, 1, mp.mpf(10) ** -20, bracket=(2, 5)) == 2

    def test_no_convergence(self):
        """x^2 + 1 has no real root; the iteration gives up."""
        with pytest.raises(NoConvergence) as excinfo:
            newton_root(lambda x: x ** 2 + 1, mp.mpf("0.5"), mp.mpf(10) ** -30, max_iter=30)
        assert excinfo.value.best is not None


class TestQuadrature:
    """Adaptive Gauss-Legendre integration."""

    def test_polynomial(self):
        """integral_0^1 x^2 = 1/3."""
        assert abs(quadrature(lambda x: x ** 2, 0, 1) - mp.mpf(1) / 3) < mp.mpf(10) ** -45

    def test_sine(self):
        """integral_0^pi sin = 2."""
        assert abs(quadrature(mp.sin, 0, mp.pi) - 2) < mp.mpf(10) ** -40

    def test_gaussian(self):
        """integral exp(-x^2) over [-12, 12] = sqrt(pi) to working precision."""
        value = quadrature(lambda x: mp.exp(-x ** 2), -12, 12, mp.mpf(10) ** -40)
        assert abs(value - mp.sqrt(mp.pi)) < mp.mpf(10) ** -38

    def test_empty_interval(self):
        """Equal limits integrate to zero."""
        assert quadrature(mp.exp, 1, 1) == 0

    def test_depth_limit(self):
        """A kink with no subdivision allowed cannot meet the tolerance."""
        with pytest.raises(ToleranceNotReached):
            quadrature(lambda x: abs(x - mp.mpf(1) / 3), 0, 1, mp.mpf(10) ** -30, max_depth=0)


def random_matrix(rng, n, symmetric=False):
    a = [[mp.mpf(rng.randint(-9, 9)) / rng.randint(1, 7) for _ in range(n)] for _ in range(n)]
    if symmetric:
        a = [[a[max(i, j)][min(i, j)] for j in range(n)] for i in range(n)]
    return a


def cofactor_det(a):
    if len(a) == 1:
        return a[0][0]
    return mp.fsum(
        (-1) ** c * a[0][c] * cofactor_det([row[:c] + row[c + 1:] for row in a[1:]]) for c in range(len(a))
    )


class TestFactorizationIdentities:
    """Cross-checks between the dense kernels on seeded random matrices."""

    @pytest.mark.parametrize("seed", range(5))
    def test_det_lu_matches_cofactors(self, seed):
        """Pivoted elimination agrees with cofactor expansion on 3 x 3 matrices."""
        a = random_matrix(random.Random(seed), 3)
        assert abs(det_lu(a) - cofactor_det(a)) < mp.mpf(10) ** -45

    @pytest.mark.parametrize("seed", range(5))
    def test_eigenvalue_product_is_determinant(self, seed):
        """The Jacobi eigenvalues multiply to det_lu of the same symmetric matrix."""
        a = random_matrix(random.Random(100 + seed), 5, symmetric=True)
        product = mp.fprod(jacobi_eigen(a))
        det = det_lu(a)
        assert abs(product - det) <= mp.mpf(10) ** -35 * max(1, abs(det))

    @pytest.mark.parametrize("seed", range(5))
    def test_cholesky_recovers_factor(self, seed):
        """cholesky(L L^T) returns L when L has a positive diagonal."""
        rng = random.Random(200 + seed)
        n = 4
        lower = [
            [mp.mpf(rng.randint(1, 9)) if i == j else mp.mpf(rng.randint(-9, 9)) / 4 if j < i else mp.zero for j in range(n)]
            for i in range(n)
        ]
        product = [[mp.fsum(lower[i][k] * lower[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        recovered = cholesky(product)
        for i in range(n):
            for j in range(n):
                assert abs(recovered[i][j] - lower[i][j]) < mp.mpf(10) ** -44


class TestNewtonConvergenceRate:
    """Newton with an analytic derivative converges quadratically."""

    def test_error_squares_each_step(self):
        """|x_{n+1} - sqrt2| <= |x_n - sqrt2|^2 for x^2 - 2 from x0 = 1."""
        history = []
        newton_root(lambda x: x ** 2 - 2, 1, mp.mpf(10) ** -45, df=lambda x: 2 * x, history=history)
        errors = [abs(x - mp.sqrt(2)) for x in [mp.one] + history]
        pairs = [(e, e_next) for e, e_next in zip(errors, errors[1:]) if e > mp.mpf(10) ** -20]
        assert len(pairs) >= 3
        for e, e_next in pairs:
            assert e_next <= e ** 2
