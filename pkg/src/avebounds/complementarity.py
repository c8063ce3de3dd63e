"""Linear and horizontal linear complementarity problems via AVE transforms.

An LCP(M, q) asks for z >= 0 with w = M z + q >= 0 and z^T w = 0.  The
horizontal variant HLCP(M, N, q) asks for z, w >= 0 with M z - N w = q and
z^T w = 0 (N = I recovers an LCP up to the sign of q).  Both reduce to
absolute value equations through a change of variables, which lets every
error and perturbation bound in this package apply to them.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import numerics
from .bounds import NEUMANN, error_bound_report, upper_factor
from .core import AveProblem, TYPE_ONE, sign_box_vertices
from .exceptions import InapplicableBoundError, SingularMatrixError

SHIFTED = "shifted"   # z = |x| + x,    w = |x| - x
HALVED = "halved"     # z = (|x|+x)/2,  w = (|x|-x)/2
CONVENTIONS = (SHIFTED, HALVED)

_BETA_SEED = 20240229


@dataclass
class LcpProblem:
    M: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.M = numerics.as_square(self.M, "M")
        self.q = numerics.as_vector(self.q, "q")
        if self.q.shape[0] != self.M.shape[0]:
            raise ValueError(f"q has length {self.q.shape[0]}, expected {self.M.shape[0]}")

    @property
    def n(self):
        return self.M.shape[0]


@dataclass
class HlcpProblem:
    M: np.ndarray
    N: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        self.M = numerics.as_square(self.M, "M")
        self.N = numerics.as_square(self.N, "N")
        self.q = numerics.as_vector(self.q, "q")
        if self.N.shape != self.M.shape:
            raise ValueError("M and N must have the same shape")
        if self.q.shape[0] != self.M.shape[0]:
            raise ValueError(f"q has length {self.q.shape[0]}, expected {self.M.shape[0]}")

    @property
    def n(self):
        return self.M.shape[0]


@dataclass
class ComplementaritySolution:
    z: np.ndarray
    w: np.ndarray
    complementarity_gap: float


def lcp_to_ave(lcp):
    """Rewrite LCP(M, q) as the AVE (I + M) x - (I - M)|x| = -q.

    The substitution is z = |x| + x, w = |x| - x (the ``shifted``
    convention), which makes z and w complementary by construction.
    """
    eye = np.eye(lcp.n)
    return AveProblem(eye + lcp.M, eye - lcp.M, -lcp.q, TYPE_ONE)


def hlcp_to_ave(hlcp):
    """Rewrite HLCP(M, N, q) as ((M+N)/2) x - ((N-M)/2)|x| = q.

    Here z = (|x| + x)/2 and w = (|x| - x)/2 (the ``halved`` convention).
    """
    return AveProblem(
        (hlcp.M + hlcp.N) / 2.0,
        (hlcp.N - hlcp.M) / 2.0,
        hlcp.q,
        TYPE_ONE,
    )


def recover_solution(x, convention=SHIFTED):
    """Map an AVE solution x back to the complementary pair (z, w)."""
    x = numerics.as_vector(x, "x")
    if convention == SHIFTED:
        z = np.abs(x) + x
        w = np.abs(x) - x
    elif convention == HALVED:
        z = (np.abs(x) + x) / 2.0
        w = (np.abs(x) - x) / 2.0
    else:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return ComplementaritySolution(z, w, float(abs(z @ w)))


def lcp_min_residual(lcp, z):
    """Natural LCP residual min(z, M z + q), written in AVE style:

        ((M + I) z + q)/2 - |(M - I) z + q|/2

    Zero exactly at solutions; at z = 0 it reduces to min(0, q).
    """
    z = numerics.as_vector(z, "z")
    if z.shape[0] != lcp.n:
        raise ValueError(f"z has length {z.shape[0]}, expected {lcp.n}")
    eye = np.eye(lcp.n)
    a = (lcp.M + eye) @ z + lcp.q
    b = (lcp.M - eye) @ z + lcp.q
    return 0.5 * a - 0.5 * np.abs(b)


def column_w_property(hlcp, limit=20):
    """Whether (M, N) has the column W-property.

    Builds every column-representative matrix (column j taken from M or
    from N) and checks that all 2**n determinants share one strict sign.
    This characterises unique solvability of the HLCP for every q.  Cost
    is exponential, so dimensions above ``limit`` are refused.
    """
    n = hlcp.n
    if n > limit:
        raise ValueError(
            f"column_w_property enumerates 2**{n} representative matrices; "
            f"raise limit (currently {limit}) explicitly if you mean it"
        )
    masks = (sign_box_vertices(n) + 1.0) / 2.0   # rows in {0,1}^n
    sign = 0.0
    chunk = 8192
    for start in range(0, masks.shape[0], chunk):
        block = masks[start:start + chunk]
        reps = (
            hlcp.M[None, :, :] * block[:, None, :]
            + hlcp.N[None, :, :] * (1.0 - block)[:, None, :]
        )
        dets = np.linalg.det(reps)
        if dets[0] == 0.0:
            return False
        if sign == 0.0:
            sign = 1.0 if dets[0] > 0 else -1.0
        if np.any(dets * sign <= 0.0):
            return False
    return True


def hlcp_error_bounds(hlcp, p=2):
    """Error-bound report for the AVE equivalent of an HLCP.

    The report's lower factor works out to max(||M||_p, ||N||_p) since the
    transform's matrices sum/difference back to M and N.
    """
    return error_bound_report(hlcp_to_ave(hlcp), p)


def lcp_comparison_bound(M, p=2):
    """Solution-error constant ||<M>^-1 max(D_M, I)||_p for an LCP matrix.

    <M> is the comparison matrix and D_M the diagonal part of M; the bound
    applies when <M> is nonsingular with entrywise nonnegative inverse
    (an H-matrix with positive diagonal).  Inapplicable otherwise.
    """
    M = numerics.as_square(M, "M")
    p = numerics.check_norm(p)
    comp = numerics.comparison_matrix(M)
    try:
        comp_inv = numerics.inverse(comp, "comparison matrix")
    except SingularMatrixError as exc:
        raise InapplicableBoundError(str(exc), condition="comparison_nonsingular") from exc
    if np.any(comp_inv < -1e-12):
        raise InapplicableBoundError(
            "comparison-matrix inverse has negative entries",
            condition="comparison_inverse_nonnegative",
        )
    d_cap = np.diag(np.maximum(np.diag(M), 1.0))
    return numerics.p_norm(comp_inv @ d_cap, p)


def hlcp_perturb_bound(hlcp, dM, dN, dq, method=NEUMANN, p=2):
    """Relative solution-perturbation bound for an HLCP.

    The bound is ``factor * coefficient`` with

        coefficient = (||dq||/||q||) (||M+N|| + ||M-N||)/2
                      + (||dM+dN|| + ||dM-dN||)/2

    and ``factor`` an upper-factor estimate for the *perturbed* AVE pair
    ((M+N+dM+dN)/2, (N-M+dN-dM)/2).
    """
    p = numerics.check_norm(p)
    dM = numerics.as_square(dM, "dM")
    dN = numerics.as_square(dN, "dN")
    dq = numerics.as_vector(dq, "dq")
    if dM.shape != hlcp.M.shape or dN.shape != hlcp.M.shape or dq.shape[0] != hlcp.n:
        raise ValueError("perturbation blocks have inconsistent shapes")
    norm_q = numerics.p_norm(hlcp.q, p)
    if norm_q == 0:
        raise ValueError("relative bounds are undefined for q = 0")
    coefficient = (
        numerics.p_norm(dq, p) / norm_q
        * (numerics.p_norm(hlcp.M + hlcp.N, p) + numerics.p_norm(hlcp.M - hlcp.N, p)) / 2.0
        + (numerics.p_norm(dM + dN, p) + numerics.p_norm(dM - dN, p)) / 2.0
    )
    shifted = AveProblem(
        (hlcp.M + hlcp.N + dM + dN) / 2.0,
        (hlcp.N - hlcp.M + dN - dM) / 2.0,
        np.zeros(hlcp.n),
        TYPE_ONE,
    )
    return upper_factor(shifted, method, p) * coefficient


def beta_factor(M, p=2, sample_budget=1000):
    """Probe max ||(I - L + L M)^-1 L||_p over diagonal L, entries in [0,1].

    Enumerates the 2**n 0/1 vertices plus ``sample_budget`` interior draws
    (fixed seed), so like the other brute-force probes it is a *lower*
    estimate of the true maximum.  A singular member means the LCP lacks
    the uniqueness property; the offending diagonal is reported through a
    warning and the result is +inf.  Limited to n <= 20.
    """
    M = numerics.as_square(M, "M")
    p = numerics.check_norm(p)
    n = M.shape[0]
    if n > 20:
        raise ValueError(f"beta_factor is limited to n <= 20, got {n}")
    rng = np.random.default_rng(_BETA_SEED)
    lam_all = np.vstack([
        (sign_box_vertices(n) + 1.0) / 2.0,
        rng.uniform(0.0, 1.0, size=(max(sample_budget, 0), n)),
    ])
    idx = np.arange(n)
    best = 0.0
    chunk = 4096
    for start in range(0, lam_all.shape[0], chunk):
        block = lam_all[start:start + chunk]
        stack = block[:, :, None] * M[None, :, :]
        stack[:, idx, idx] += 1.0 - block
        try:
            inv = np.linalg.inv(stack)
        except np.linalg.LinAlgError:
            for i in range(block.shape[0]):
                try:
                    one = np.linalg.inv(stack[i])
                except np.linalg.LinAlgError:
                    warnings.warn(
                        "singular member at diagonal "
                        f"{np.array2string(block[i], precision=3)}; "
                        "the uniqueness factor is unbounded"
                    )
                    return float("inf")
                prod = one * block[i][None, :]
                best = max(best, numerics.p_norm(prod, p))
            continue
        prod = inv * block[:, None, :]
        if p == 1:
            vals = np.abs(prod).sum(axis=1).max(axis=1)
        elif p == 2:
            vals = np.linalg.svd(prod, compute_uv=False)[:, 0]
        else:
            vals = np.abs(prod).sum(axis=2).max(axis=1)
        best = max(best, float(vals.max()))
    return best


@dataclass
class LcpPerturbFactors:
    """Constants used by the region perturbation bound.

    ``beta`` is the uniqueness factor of the reference matrix, ``eta`` the
    radius parameter of the matrix region (0 <= eta < 1), ``alpha`` the
    inflated factor valid across the region, and ``delta`` the scale
    epsilon * beta * ||M||.
    """

    beta: float
    eta: float
    alpha: float
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.eta < 1.0:
            raise ValueError("eta must lie in [0, 1)")
        if self.beta < 0 or self.delta < 0:
            raise ValueError("beta and delta must be nonnegative")


def region_factors(M, eta, epsilon, p=2, sample_budget=1000):
    """Build LcpPerturbFactors for matrix M with region radius eta and
    relative perturbation scale epsilon."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    beta = beta_factor(M, p, sample_budget)
    if not 0.0 <= eta < 1.0:
        raise ValueError("eta must lie in [0, 1)")
    return LcpPerturbFactors(
        beta=beta,
        eta=eta,
        alpha=beta / (1.0 - eta),
        delta=epsilon * beta * numerics.p_norm(M, p),
    )


def lcp_pair_bounds(lcp_a, lcp_b, p=2, sample_budget=1000):
    """Distance bounds between the solutions of two LCPs (A, b) and (B, c).

    Returns ``(absolute, relative)``:

        absolute = beta(A) (beta(B) ||A - B|| ||(-c)+|| + ||b - c||)
        relative = beta(B) (||A - B|| + ||b - c|| ||A|| / ||(-b)+||)

    Both problems are assumed uniquely solvable; a +inf beta factor makes
    the bounds +inf.  When ||(-b)+|| = 0 the relative form is undefined
    and None is returned in its place.
    """
    p = numerics.check_norm(p)
    if lcp_a.n != lcp_b.n:
        raise ValueError("the two problems must have the same dimension")
    beta_a = beta_factor(lcp_a.M, p, sample_budget)
    beta_b = beta_factor(lcp_b.M, p, sample_budget)
    norm_ab = numerics.p_norm(lcp_a.M - lcp_b.M, p)
    norm_bc = numerics.p_norm(lcp_a.q - lcp_b.q, p)
    neg_c = numerics.p_norm(numerics.positive_part(-lcp_b.q), p)
    neg_b = numerics.p_norm(numerics.positive_part(-lcp_a.q), p)

    absolute = beta_a * (beta_b * norm_ab * neg_c + norm_bc)
    relative = None
    if neg_b > 0:
        relative = beta_b * (norm_ab + norm_bc * numerics.p_norm(lcp_a.M, p) / neg_b)
    return absolute, relative


def lcp_region_bound(factors, norm_ab, negc_norm, bc_norm):
    """Worst-case pair bounds over a matrix region.

    For any matrix within the ``factors.eta`` region of the reference and
    data deviations measured by ``norm_ab`` (matrix), ``negc_norm``
    (positive part of the negated second right-hand side) and ``bc_norm``
    (right-hand side difference):

        absolute = alpha^2 * norm_ab * negc_norm + alpha * bc_norm
        relative = 2 delta / (1 - delta)        (needs delta < 1)
    """
    for name, val in (("norm_ab", norm_ab), ("negc_norm", negc_norm), ("bc_norm", bc_norm)):
        if val < 0:
            raise ValueError(f"{name} must be nonnegative")
    absolute = factors.alpha**2 * norm_ab * negc_norm + factors.alpha * bc_norm
    if factors.delta >= 1.0:
        raise InapplicableBoundError(
            f"relative form needs delta < 1, got {factors.delta:.6g}",
            condition="delta",
        )
    relative = 2.0 * factors.delta / (1.0 - factors.delta)
    return absolute, relative
