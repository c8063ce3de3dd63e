"""Residual-based error bounds for absolute value equations.

For a problem ``A x - B|x| = b`` the distance between a trial point x and
the true solution is sandwiched by multiples of the natural residual:

    ||r(x)|| / lower_factor  <=  ||x - x*||  <=  upper * ||r(x)||

``lower_factor`` has a cheap closed form; the upper constant is not
computable exactly, so this module offers three estimators with different
hypotheses plus a brute-force probe for small problems.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics
from .core import TYPE_TWO, residual, sign_box_vertices
from .exceptions import InapplicableBoundError, SingularMatrixError

NEUMANN = "neumann"
SINGULAR_GAP = "singular_gap"
NORM_RATIO = "norm_ratio"
METHODS = (NEUMANN, SINGULAR_GAP, NORM_RATIO)

_BRUTE_SEED = 20240517


def lower_factor(problem, p=2):
    """max(||A - B||_p, ||A + B||_p) -- the denominator of the lower error
    bound.  Valid for both problem forms.

    The two norms are the values of ||A - B diag(d)||_p at the extreme
    diagonals d = +/-1.  For p = 1 the maximum over the whole sign box is
    always attained there, so the resulting lower bound is exact; for
    p = 2 and p = inf an interior or mixed-sign diagonal can exceed both
    extremes slightly, making the bound a tight estimate rather than a
    guarantee.  ``brute_force_alpha`` probes the box directly when a
    certified comparison is needed, and ||A||_p + ||B||_p always dominates
    the whole family in any norm.
    """
    p = numerics.check_norm(p)
    return max(
        numerics.p_norm(problem.A - problem.B, p),
        numerics.p_norm(problem.A + problem.B, p),
    )


def _neumann_factor(problem, p):
    try:
        A_inv = numerics.inverse(problem.A, "A")
    except SingularMatrixError as exc:
        raise InapplicableBoundError(str(exc), condition="invertible_A") from exc
    K = np.abs(problem.B @ A_inv) if problem.form == TYPE_TWO else np.abs(A_inv @ problem.B)
    rho = numerics.spectral_radius_nonneg(K)
    if rho >= 1.0:
        raise InapplicableBoundError(
            f"spectral radius of the absolute iteration matrix is {rho:.6g} >= 1",
            condition="spectral_radius",
        )
    series = numerics.inverse(np.eye(problem.n) - K, "I - K")
    if problem.form == TYPE_TWO:
        return numerics.p_norm(A_inv, p) * numerics.p_norm(series, p)
    return numerics.p_norm(series, p) * numerics.p_norm(A_inv, p)


def _singular_gap_factor(problem):
    smin_a, _ = numerics.extreme_singulars(problem.A)
    _, smax_b = numerics.extreme_singulars(problem.B)
    gap = smin_a - smax_b
    if gap <= 0.0:
        raise InapplicableBoundError(
            f"singular value gap is {gap:.6g} <= 0 "
            f"(smallest of A: {smin_a:.6g}, largest of B: {smax_b:.6g})",
            condition="singular_value_gap",
        )
    return 1.0 / gap


def _norm_ratio_factor(problem):
    try:
        A_inv = numerics.inverse(problem.A, "A")
        B_inv = numerics.inverse(problem.B, "B")
    except SingularMatrixError as exc:
        raise InapplicableBoundError(str(exc), condition="invertible_factors") from exc
    K = problem.B @ A_inv if problem.form == TYPE_TWO else A_inv @ problem.B
    t = numerics.p_norm(K, 2)
    if t >= 1.0:
        raise InapplicableBoundError(
            f"largest singular value of the ratio matrix is {t:.6g} >= 1",
            condition="ratio_singular_value",
        )
    return t * numerics.p_norm(B_inv, 2) / (1.0 - t)


def upper_factor(problem, method=NEUMANN, p=2):
    """One multiplicative upper constant for ``||x - x*|| <= c ||r(x)||``.

    * ``neumann``: needs the spectral radius of |A^-1 B| (type1) or
      |B A^-1| (type2) below one; works in any supported norm.
    * ``singular_gap``: 1 / (smallest singular value of A - largest of B);
      2-norm only.
    * ``norm_ratio``: needs B invertible and the largest singular value of
      A^-1 B (B A^-1 for type2) below one; 2-norm only.

    Raises InapplicableBoundError when the method's hypothesis fails and
    ValueError when a 2-norm-only method is asked for in another norm.
    """
    p = numerics.check_norm(p)
    if method == NEUMANN:
        return _neumann_factor(problem, p)
    if method == SINGULAR_GAP:
        if p != 2:
            raise ValueError("singular_gap is defined for the 2-norm only")
        return _singular_gap_factor(problem)
    if method == NORM_RATIO:
        if p != 2:
            raise ValueError("norm_ratio is defined for the 2-norm only")
        return _norm_ratio_factor(problem)
    raise ValueError(f"unknown method {method!r}; use one of {METHODS}")


def identity_ave_bounds(A, p=2):
    """Lower/upper constants for the special case B = I.

    Requires the smallest singular value of A to exceed one.  Returns
    ``(lower, upper)`` where lower = ||A + I||_p + ||A - I||_p and
    upper = lower / (smin(A)**2 - 1).
    """
    A = numerics.as_square(A, "A")
    p = numerics.check_norm(p)
    smin, _ = numerics.extreme_singulars(A)
    if smin <= 1.0:
        raise InapplicableBoundError(
            f"smallest singular value of A is {smin:.6g} <= 1",
            condition="smallest_singular_value",
        )
    eye = np.eye(A.shape[0])
    low = numerics.p_norm(A + eye, p) + numerics.p_norm(A - eye, p)
    return low, low / (smin**2 - 1.0)


@dataclass
class UpperFactor:
    method: str
    value: float | None
    applicable: bool
    reason: str = ""


@dataclass
class ErrorBoundReport:
    lower_factor: float
    upper_factors: list = field(default_factory=list)
    identity_lower: float | None = None
    identity_upper: float | None = None
    p: float = 2

    def best_upper(self):
        vals = [u.value for u in self.upper_factors if u.applicable]
        return min(vals) if vals else None


def error_bound_report(problem, p=2):
    """Evaluate the lower factor and every estimator that applies.

    Inapplicable estimators are recorded with the reason instead of being
    dropped, so callers can see what was tried.  When B is exactly the
    identity and its special-case pair applies, that pair is included too.
    """
    p = numerics.check_norm(p)
    report = ErrorBoundReport(lower_factor=lower_factor(problem, p), p=p)
    for method in METHODS:
        if method != NEUMANN and p != 2:
            report.upper_factors.append(UpperFactor(
                method, None, False, "defined for the 2-norm only"))
            continue
        try:
            value = upper_factor(problem, method, p)
        except InapplicableBoundError as exc:
            report.upper_factors.append(UpperFactor(method, None, False, str(exc)))
        else:
            report.upper_factors.append(UpperFactor(method, value, True))
    if np.array_equal(problem.B, np.eye(problem.n)):
        try:
            report.identity_lower, report.identity_upper = identity_ave_bounds(problem.A, p)
        except InapplicableBoundError:
            pass
    return report


@dataclass
class ErrorInterval:
    residual_norm: float
    lower: float
    upper: float
    upper_method: str


def error_interval(problem, x, p=2):
    """Bracket ``||x - x*||_p`` from the residual at x.

    The upper end uses the smallest applicable estimator; if none applies
    the interval cannot be closed and InapplicableBoundError is raised.
    """
    p = numerics.check_norm(p)
    r_norm = numerics.p_norm(residual(problem, x), p)
    low_fac = lower_factor(problem, p)
    lower = r_norm / low_fac if low_fac > 0 else 0.0

    best = None
    best_method = None
    reasons = []
    for method in METHODS:
        if method != NEUMANN and p != 2:
            continue
        try:
            value = upper_factor(problem, method, p)
        except InapplicableBoundError as exc:
            reasons.append(f"{method}: {exc}")
            continue
        if best is None or value < best:
            best, best_method = value, method
    if best is None:
        raise InapplicableBoundError(
            "no upper-bound estimator applies: " + "; ".join(reasons),
            condition="no_applicable_estimator",
        )
    return ErrorInterval(r_norm, lower, best * r_norm, best_method)


def _stack_norms(stack, p):
    if p == 1:
        return np.abs(stack).sum(axis=1).max(axis=1)
    if p == 2:
        return np.linalg.svd(stack, compute_uv=False)[:, 0]
    return np.abs(stack).sum(axis=2).max(axis=1)


def brute_force_alpha(problem, p=2, sample_budget=1000):
    """Probe max ||(A - B diag(d))^{-1}||_p over the sign box d in [-1,1]^n.

    Enumerates all 2**n sign vertices plus ``sample_budget`` sampled
    interior diagonals (fixed seed).  This is a *lower* estimate of the
    true maximum -- the norm need not peak at a vertex -- but it is an
    effective cross-check for the closed-form estimators at small n.
    Returns +inf when a singular member is hit, which also certifies that
    the problem is not uniquely solvable for every right-hand side.
    Limited to n <= 20.
    """
    p = numerics.check_norm(p)
    n = problem.n
    if n > 20:
        raise ValueError(f"brute_force_alpha is limited to n <= 20, got {n}")
    A, B = problem.A, problem.B
    left = problem.form == TYPE_TWO

    rng = np.random.default_rng(_BRUTE_SEED)
    d_all = np.vstack([
        sign_box_vertices(n),
        rng.uniform(-1.0, 1.0, size=(max(sample_budget, 0), n)),
    ])
    best = 0.0
    chunk = 4096
    for start in range(0, d_all.shape[0], chunk):
        block = d_all[start:start + chunk]
        if left:
            stack = A[None, :, :] - block[:, :, None] * B[None, :, :]
        else:
            stack = A[None, :, :] - B[None, :, :] * block[:, None, :]
        try:
            inv = np.linalg.inv(stack)
        except np.linalg.LinAlgError:
            # at least one member is exactly singular; find it the slow way
            for i in range(block.shape[0]):
                try:
                    one = np.linalg.inv(stack[i])
                except np.linalg.LinAlgError:
                    return float("inf")
                best = max(best, float(_stack_norms(one[None], p)[0]))
            continue
        best = max(best, float(_stack_norms(inv, p).max()))
    return best


def shifted_norm_slack(A, alpha, p=2):
    """Slack of two shifted-norm inequalities used to sanity-check norms.

    For alpha > 0 the quantity s = ||alpha I + A|| + ||alpha I - A||
    always dominates 2 alpha - ||A||, and when ||A|| <= alpha it also
    dominates alpha + ||A||.  Returns ``(s - (2 alpha - ||A||), second)``
    where ``second`` is ``s - (alpha + ||A||)`` or None when the premise
    ||A|| <= alpha does not hold.  Both slacks are nonnegative up to
    roundoff; a materially negative value would indicate a broken norm.
    """
    A = numerics.as_square(A, "A")
    p = numerics.check_norm(p)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    eye = np.eye(A.shape[0])
    norm_a = numerics.p_norm(A, p)
    s = numerics.p_norm(alpha * eye + A, p) + numerics.p_norm(alpha * eye - A, p)
    slack1 = s - (2.0 * alpha - norm_a)
    slack2 = s - (alpha + norm_a) if norm_a <= alpha else None
    return slack1, slack2
