"""Absolute value equation problem data and structural checks.

Two problem forms are supported:

* ``type1``:  A x - B|x| = b   (the absolute value applied to x)
* ``type2``:  A x - |B x| = b  (the absolute value applied to B x)

Both reduce to an ordinary linear system when B = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics

TYPE_ONE = "type1"
TYPE_TWO = "type2"
FORMS = (TYPE_ONE, TYPE_TWO)

VERDICT_PROVEN = "proven_unique"
VERDICT_HEURISTIC = "heuristic_pass"
VERDICT_INCONCLUSIVE = "inconclusive"
VERDICT_FAILS = "fails_all_sufficient_conditions"

# Fixed seed so solvability sampling is reproducible run to run.
_SAMPLE_SEED = 20240811


@dataclass
class AveProblem:
    """An absolute value equation ``A x - B|x| = b`` (or the type2 variant)."""

    A: np.ndarray
    B: np.ndarray
    b: np.ndarray
    form: str = TYPE_ONE

    def __post_init__(self):
        self.A = numerics.as_square(self.A, "A")
        self.B = numerics.as_square(self.B, "B")
        self.b = numerics.as_vector(self.b, "b")
        if self.B.shape != self.A.shape:
            raise ValueError(
                f"A and B must have the same shape, got {self.A.shape} vs {self.B.shape}"
            )
        if self.b.shape[0] != self.A.shape[0]:
            raise ValueError(
                f"b has length {self.b.shape[0]}, expected {self.A.shape[0]}"
            )
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}, got {self.form!r}")

    @property
    def n(self):
        return self.A.shape[0]

    def perturbed(self, dA, dB, db):
        """Return a new problem with the same form and shifted data."""
        return AveProblem(self.A + dA, self.B + dB, self.b + db, self.form)


def residual(problem, x):
    """Natural residual of ``x``: ``A x - B|x| - b`` (type1) or
    ``A x - |B x| - b`` (type2)."""
    x = numerics.as_vector(x, "x")
    if x.shape[0] != problem.n:
        raise ValueError(f"x has length {x.shape[0]}, expected {problem.n}")
    if problem.form == TYPE_ONE:
        return problem.A @ x - problem.B @ np.abs(x) - problem.b
    return problem.A @ x - np.abs(problem.B @ x) - problem.b


def sign_diagonal(a, b):
    """Diagonal ``d`` with ``|a| - |b| = d * (a - b)`` entrywise.

    Each entry satisfies |d_i| <= 1 (triangle inequality); entries where
    a_i == b_i are set to zero since any value in [-1, 1] would do.  This
    is the mean-value style factorisation that turns a difference of
    residuals into a single linear map.
    """
    a = numerics.as_vector(a, "a")
    b = numerics.as_vector(b, "b")
    if a.shape != b.shape:
        raise ValueError("sign_diagonal: vectors must have the same length")
    d = np.zeros_like(a)
    diff = a - b
    nz = diff != 0
    d[nz] = (np.abs(a[nz]) - np.abs(b[nz])) / diff[nz]
    # Roundoff at near-ties can push a hair outside [-1, 1]; clamp it.
    return np.clip(d, -1.0, 1.0)


@dataclass
class SolvabilityCheck:
    """One sufficient condition: ``value`` compared against ``threshold``."""

    name: str
    value: float
    threshold: float
    passed: bool
    note: str = ""


@dataclass
class SolvabilityReport:
    checks: list = field(default_factory=list)
    verdict: str = VERDICT_INCONCLUSIVE

    @property
    def proven(self):
        return self.verdict == VERDICT_PROVEN


def _sign_vertex_matrices(A, B, d_values, left=False):
    """Stack of A - B*diag(d) (or A - diag(d)*B when ``left``) for each row

    of ``d_values``; shapes (k, n, n)."""
    if left:
        return A[None, :, :] - d_values[:, :, None] * B[None, :, :]
    return A[None, :, :] - B[None, :, :] * d_values[:, None, :]


def _all_nonsingular(A, B, d_values, left, chunk=16384):
    """True if every A - B diag(d) over the rows of d_values is nonsingular.

    Returns (ok, witness) where witness is the offending d row if any.
    Uses batched determinants; exact zeros are what we are screening for,
    but anything below a tiny absolute floor is treated as singular too.
    """
    n = A.shape[1]
    scale = max(np.linalg.norm(A, np.inf), np.linalg.norm(B, np.inf), 1.0)
    floor = 1e-12 * scale**n
    for start in range(0, d_values.shape[0], chunk):
        block = d_values[start:start + chunk]
        dets = np.linalg.det(_sign_vertex_matrices(A, B, block, left))
        bad = np.abs(dets) <= floor
        if np.any(bad):
            return False, block[np.argmax(bad)]
    return True, None


def sign_box_vertices(n):
    """All 2**n sign vectors in {-1, +1}**n as an array of shape (2**n, n)."""
    if n > 25:
        raise ValueError(f"refusing to enumerate 2**{n} sign vertices")
    counts = np.arange(2**n, dtype=np.int64)
    bits = (counts[:, None] >> np.arange(n)[None, :]) & 1
    return bits.astype(float) * 2.0 - 1.0


def solvability_report(problem, exhaustive_limit=20, samples=1000):
    """Screen a problem for unique solvability.

    Three sufficient conditions are evaluated (mirrored for type2):

    * spectral radius of |A^-1 B| below one,
    * smallest singular value of A above the largest of B,
    * largest singular value of A^-1 B below one.

    Any pass proves a unique solution exists for every right-hand side
    (``proven_unique``).  When all three fail and the dimension allows it,
    the sign-diagonal family A - B diag(d) is tested for nonsingularity at
    every vertex d in {-1,1}^n plus ``samples`` interior draws:

    * no singular member found   -> ``heuristic_pass`` (evidence, not proof),
    * singular member found      -> ``inconclusive`` (some right-hand sides
      lack unique solutions; this particular b may or may not),
    * dimension over the limit   -> ``fails_all_sufficient_conditions``.

    A non-invertible A simply fails the conditions that need it; it is not
    an error here.
    """
    A, B = problem.A, problem.B
    left = problem.form == TYPE_TWO
    checks = []

    smin_a, _ = numerics.extreme_singulars(A)
    _, smax_b = numerics.extreme_singulars(B)
    checks.append(SolvabilityCheck(
        "singular_value_gap", smin_a - smax_b, 0.0, smin_a > smax_b,
        "smallest singular value of A minus largest of B, must be positive",
    ))

    try:
        A_inv = numerics.inverse(A, "A")
    except numerics.SingularMatrixError:
        A_inv = None
    if A_inv is None:
        checks.append(SolvabilityCheck(
            "spectral_radius", math.inf, 1.0, False, "A is numerically singular"))
        checks.append(SolvabilityCheck(
            "largest_singular_ratio", math.inf, 1.0, False, "A is numerically singular"))
    else:
        K = B @ A_inv if left else A_inv @ B
        rho = numerics.spectral_radius_nonneg(np.abs(K))
        checks.append(SolvabilityCheck(
            "spectral_radius", rho, 1.0, rho < 1.0,
            "spectral radius of |A^-1 B| (|B A^-1| for type2), must be below one",
        ))
        sigma = numerics.p_norm(K, 2)
        checks.append(SolvabilityCheck(
            "largest_singular_ratio", sigma, 1.0, sigma < 1.0,
            "largest singular value of A^-1 B (B A^-1 for type2), must be below one",
        ))

    if any(c.passed for c in checks):
        return SolvabilityReport(checks, VERDICT_PROVEN)

    n = problem.n
    if n > exhaustive_limit:
        return SolvabilityReport(checks, VERDICT_FAILS)

    vertices = sign_box_vertices(n)
    rng = np.random.default_rng(_SAMPLE_SEED)
    interior = rng.uniform(-1.0, 1.0, size=(max(samples, 0), n))
    ok_v, witness = _all_nonsingular(A, B, vertices, left)
    ok_i = True
    if ok_v:
        ok_i, witness = _all_nonsingular(A, B, interior, left)
    if ok_v and ok_i:
        checks.append(SolvabilityCheck(
            "sign_family_nonsingular", 1.0, 1.0, True,
            f"all {len(vertices)} sign vertices and {len(interior)} sampled "
            "interior diagonals are nonsingular",
        ))
        return SolvabilityReport(checks, VERDICT_HEURISTIC)
    checks.append(SolvabilityCheck(
        "sign_family_nonsingular", 0.0, 1.0, False,
        f"singular member found at d = {np.array2string(witness, precision=3)}; "
        "some right-hand sides lack unique solutions",
    ))
    return SolvabilityReport(checks, VERDICT_INCONCLUSIVE)
