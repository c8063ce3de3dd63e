"""Exception types raised across the package."""


class AveBoundsError(Exception):
    """Base class for all errors raised by avebounds."""


class SingularMatrixError(AveBoundsError):
    """A matrix that must be inverted is singular or numerically singular."""


class InapplicableBoundError(AveBoundsError):
    """A bound was requested whose hypothesis fails on the given data.

    ``condition`` names the failed hypothesis so callers (and the CLI) can
    report *why* the estimate is unavailable rather than just that it is.
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class NonConvergenceError(AveBoundsError):
    """An iterative solve did not reach the requested tolerance.

    Raised only by drivers that cannot proceed without a solution (for
    example the perturbation experiment).  The solver itself reports
    non-convergence through ``SolveResult.converged`` instead.
    """
