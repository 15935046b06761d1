"""
Exception hierarchy for the solver suite.

Every error carries the exit code the command line returns for it:
2 for invalid input, 3 for numerical failure.
"""


class SolverError(Exception):
    """Base class for all solver failures."""
    exit_code = 3


class InvalidInput(SolverError, ValueError):
    """Arguments outside an operation's domain."""
    exit_code = 2


class InvalidK(InvalidInput):
    """Harmonium spring constant k must be positive."""


class Unbound(InvalidInput):
    """Coupled-oscillator coupling with no square-integrable spectrum (lambda >= 1/2)."""

    def __init__(self, lam):
        super().__init__(
            f"lambda = {lam} has no bound states: the coupled oscillator binds only when lambda < 1/2"
        )
        self.lam = lam

    def __reduce__(self):
        return type(self), (self.lam,)


class NotNormalizable(InvalidInput):
    """Gaussian trial function with alpha <= 0 or alpha + 2*beta <= 0."""


class OverlayParseError(InvalidInput):
    """Malformed external k,E0 overlay file."""


class SeriesTooShort(InvalidInput):
    """Riccati series does not reach the coefficients a Hankel matrix needs."""


class NotPositiveDefinite(SolverError):
    """Cholesky pivot vanished or went negative at working precision."""


class IterationLimit(SolverError):
    """Jacobi rotation sweeps exceeded their cap."""


class NoConvergence(SolverError):
    """An iteration stopped without meeting its tolerance."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best

    def __reduce__(self):
        return type(self), (str(self), self.best)


class RootLost(NoConvergence):
    """Riccati-Pade root tracking left the ground-state branch."""


class NoSignChange(SolverError):
    """Bracket endpoints have the same sign."""


class ToleranceNotReached(SolverError):
    """Adaptive quadrature hit its subdivision depth."""


class NonMinimum(SolverError):
    """Stationary point of the variational integral that is not a minimum."""
