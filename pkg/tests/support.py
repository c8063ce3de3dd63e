"""Shared instance generators for the test suite.

Everything here is deterministic given the caller's rng, so tests freeze
behaviour by fixing their seeds.
"""
import numpy as np

from avebounds import AveProblem, LcpProblem, Perturbation, TYPE_ONE, sign_box_vertices


def spectral_radius(m):
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def random_solvable(rng, n, rho_cap=0.9, form=TYPE_ONE):
    """Random AVE with a diagonally inflated A; B is rescaled so that the
    absolute iteration matrix has spectral radius uniform in (0.3, rho_cap),
    which keeps the fixed-point solver contractive."""
    A = rng.normal(size=(n, n))
    A += (1.2 + np.linalg.norm(A, 2)) * np.eye(n)
    B = rng.normal(size=(n, n))
    K = np.linalg.inv(A) @ B if form == TYPE_ONE else B @ np.linalg.inv(A)
    rho = spectral_radius(np.abs(K))
    target = rng.uniform(0.3, rho_cap)
    if rho > 0:
        B *= target / rho
    b = rng.normal(size=n)
    return AveProblem(A, B, b, form)


def random_perturbation(rng, n, scale):
    """Unstructured dense perturbation at the given absolute scale."""
    return Perturbation(
        scale * rng.normal(size=(n, n)),
        scale * rng.normal(size=(n, n)),
        scale * rng.normal(size=n),
    )


def envelope_perturbation(rng, problem, eps):
    """Perturbation drawn inside the componentwise envelope
    |dA| <= eps |A|, |dB| <= eps |B|, |db| <= eps |b|."""
    n = problem.n
    return Perturbation(
        eps * rng.uniform(-1, 1, (n, n)) * np.abs(problem.A),
        eps * rng.uniform(-1, 1, (n, n)) * np.abs(problem.B),
        eps * rng.uniform(-1, 1, n) * np.abs(problem.b),
        epsilon=eps,
    )


def random_hplus_lcp(rng, n):
    """Strictly row diagonally dominant M with positive diagonal, i.e. an
    H-matrix with positive diagonal, paired with an unrestricted q."""
    off = rng.normal(size=(n, n))
    np.fill_diagonal(off, 0.0)
    M = off.copy()
    np.fill_diagonal(M, np.abs(off).sum(axis=1) + rng.uniform(1.0, 3.0, size=n))
    return LcpProblem(M, rng.normal(size=n))


def vertex_mu2(problem):
    """Entrywise max of |(A - B diag(d))^-1| over all sign vertices.

    The entries of the inverse are ratios of multilinear functions of d and
    are coordinatewise monotone between their poles, so the maximum over the
    whole box is attained at a vertex; at small n this is exact."""
    verts = sign_box_vertices(problem.n)
    stack = problem.A[None, :, :] - problem.B[None, :, :] * verts[:, None, :]
    return np.abs(np.linalg.inv(stack)).max(axis=0)
