"""Fixed-point reference solver for absolute value equations.

The iteration is the classic Picard scheme

    x_{k+1} = A^{-1} (B |x_k| + b)        (type1)
    x_{k+1} = A^{-1} (|B x_k| + b)        (type2)

with A factored once.  It converges linearly whenever the relevant
contraction condition holds (for instance ||A^-1||_2 ||B||_2 < 1); it is
deliberately simple because the package needs a reproducible reference
solution, not speed records.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import numerics
from .core import TYPE_ONE, residual
from .exceptions import SingularMatrixError


@dataclass
class SolveOptions:
    initial: np.ndarray | None = None   # default: zero vector
    tolerance: float = 1e-6             # stop when ||x_{k+1} - x_k||_2 < tolerance
    max_iterations: int = 10000

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class SolveResult:
    x: np.ndarray
    iterations: int
    final_step_norm: float
    final_residual_norm: float
    converged: bool


def picard_solve(problem, options=None):
    """Run the fixed-point iteration on ``problem``.

    Non-convergence within the iteration budget is an outcome, not an
    exception: the result carries ``converged=False`` and the last iterate.
    A numerically singular A is an error since the iteration is undefined.
    """
    opts = options or SolveOptions()
    A, B, b = problem.A, problem.B, problem.b

    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularMatrixError(
            f"picard_solve: A is singular to working precision (cond ~ {cond:.3e})"
        )
    lu = lu_factor(A)

    if opts.initial is None:
        x = np.zeros(problem.n)
    else:
        x = numerics.as_vector(opts.initial, "initial").copy()
        if x.shape[0] != problem.n:
            raise ValueError(f"initial guess has length {x.shape[0]}, expected {problem.n}")

    type_one = problem.form == TYPE_ONE
    step = np.inf
    converged = False
    iterations = 0
    for iterations in range(1, opts.max_iterations + 1):
        rhs = B @ np.abs(x) + b if type_one else np.abs(B @ x) + b
        x_next = lu_solve(lu, rhs)
        step = float(np.linalg.norm(x_next - x))
        x = x_next
        if step < opts.tolerance:
            converged = True
            break

    res_norm = float(np.linalg.norm(residual(problem, x)))
    return SolveResult(x, iterations, step, res_norm, converged)
