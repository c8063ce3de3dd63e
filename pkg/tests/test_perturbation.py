import numpy as np
import pytest

from avebounds import (
    AveProblem,
    NEUMANN,
    Perturbation,
    SINGULAR_GAP,
    SolveOptions,
    classical_linear_bounds,
    componentwise_bound,
    general_relative_bound,
    perturbation_experiment,
    picard_solve,
    rhs_only_bound,
    upper_factor,
)
from avebounds.exceptions import InapplicableBoundError, NonConvergenceError
from avebounds.harness import gen_perturbation, gen_problem
from avebounds.complementarity import lcp_to_ave

from support import envelope_perturbation, random_solvable, vertex_mu2


def table_one_cell(eps):
    problem = lcp_to_ave(gen_problem("tridiag", 30))
    return problem, gen_perturbation("tridiag", 30, eps)


class TestPerturbation:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            Perturbation(np.eye(2), np.eye(3), np.zeros(2))
        with pytest.raises(ValueError):
            Perturbation(np.eye(2), np.eye(2), np.zeros(3))
        with pytest.raises(ValueError):
            Perturbation(np.eye(2), np.eye(2), np.zeros(2), epsilon=-0.1)

    def test_validate_dims(self):
        p = AveProblem(np.eye(3), np.zeros((3, 3)), np.ones(3))
        pert = Perturbation(np.eye(2), np.eye(2), np.zeros(2))
        with pytest.raises(ValueError):
            pert.validate_dims(p)

    def test_envelope_violations(self):
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        clean = Perturbation([[0.1]], [[0.05]], [0.2], epsilon=0.1)
        assert clean.componentwise_violations(p) == []
        no_eps = Perturbation([[0.1]], [[0.05]], [0.2])
        assert no_eps.componentwise_violations(p) == ["epsilon is not set"]
        too_big = Perturbation([[0.5]], [[0.05]], [0.2], epsilon=0.1)
        assert too_big.componentwise_violations(p) == ["|dA| <= epsilon |A| fails"]
        # a zero entry in b makes any db there a violation
        p0 = AveProblem(np.eye(2), np.zeros((2, 2)), [1.0, 0.0])
        bad_b = Perturbation(np.zeros((2, 2)), np.zeros((2, 2)), [0.0, 0.01],
                             epsilon=0.1)
        assert bad_b.componentwise_violations(p0) == ["|db| <= epsilon |b| fails"]


class TestRhsOnlyBound:
    def test_scalar_literal(self):
        # factor 1, times (0.3/3) * (2 + 1) = 0.3
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        assert rhs_only_bound(p, [0.3]) == pytest.approx(0.3, abs=1e-12)

    def test_rejects_zero_rhs(self):
        p = AveProblem([[2.0]], [[1.0]], [0.0])
        with pytest.raises(ValueError):
            rhs_only_bound(p, [0.1])

    def test_rejects_wrong_length(self):
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        with pytest.raises(ValueError):
            rhs_only_bound(p, [0.1, 0.2])

    def test_propagates_inapplicability(self):
        p = AveProblem(np.eye(2), np.eye(2), np.ones(2))
        with pytest.raises(InapplicableBoundError):
            rhs_only_bound(p, [0.1, 0.0])


class TestGeneralRelativeBound:
    def test_zero_perturbation_gives_zero_bounds(self):
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        zero = Perturbation([[0.0]], [[0.0]], [0.0])
        rep = general_relative_bound(p, zero)
        assert rep.w == 0.0
        assert rep.tau == 0.0
        assert rep.upsilon == 0.0
        assert rep.nu == 0.0
        assert len(rep.estimates) == 3
        assert rep.notes == []

    def test_frozen_benchmark_cell(self):
        problem, pert = table_one_cell(0.01)
        rep = general_relative_bound(problem, pert)
        assert rep.w == pytest.approx(0.0842454140387942, rel=1e-9)
        assert rep.tau == pytest.approx(0.284482587726688, rel=1e-9)
        assert rep.upsilon == pytest.approx(0.0464549117216513, rel=1e-9)
        assert rep.nu == pytest.approx(0.110368928442537, rel=1e-9)

    def test_truncated_gap_opens_when_full_gap_is_closed(self):
        # On the benchmark pair the full singular-value gap of the perturbed
        # matrices is negative, yet the truncated probe still produces a
        # finite estimate; that is the point of the truncation.
        problem, pert = table_one_cell(0.01)
        perturbed = problem.perturbed(pert.dA, pert.dB, pert.db)
        with pytest.raises(InapplicableBoundError):
            upper_factor(perturbed, SINGULAR_GAP, 2)
        rep = general_relative_bound(problem, pert)
        assert rep.upsilon is not None and rep.upsilon > 0

    def test_named_method_raises_when_inapplicable(self):
        p = AveProblem(np.eye(2), np.eye(2), np.ones(2))
        zero = Perturbation(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros(2))
        with pytest.raises(InapplicableBoundError):
            general_relative_bound(p, zero, method=NEUMANN)

    def test_unnamed_methods_record_notes(self):
        p = AveProblem(np.eye(2), np.eye(2), np.ones(2))
        zero = Perturbation(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros(2))
        rep = general_relative_bound(p, zero)
        assert rep.tau is None and rep.upsilon is None and rep.nu is None
        assert len(rep.notes) == 3
        assert rep.estimates == []

    def test_one_norm_keeps_tau_only(self):
        problem, pert = table_one_cell(0.01)
        rep = general_relative_bound(problem, pert, p=1)
        assert rep.tau is not None
        assert rep.upsilon is None and rep.nu is None
        assert any("2-norm" in note for note in rep.notes)

    def test_unknown_method(self):
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        zero = Perturbation([[0.0]], [[0.0]], [0.0])
        with pytest.raises(ValueError):
            general_relative_bound(p, zero, method="secant")

    def test_rejects_zero_rhs(self):
        p = AveProblem([[2.0]], [[1.0]], [0.0])
        zero = Perturbation([[0.0]], [[0.0]], [0.0])
        with pytest.raises(ValueError):
            general_relative_bound(p, zero)

    def test_coefficient_is_exactly_linear_in_scale(self):
        problem, pert1 = table_one_cell(0.01)
        _, pert2 = table_one_cell(0.02)
        w1 = general_relative_bound(problem, pert1).w
        w2 = general_relative_bound(problem, pert2).w
        assert w2 == pytest.approx(2.0 * w1, rel=1e-12)
        assert w1 / 0.01 == pytest.approx(8.42454140387942, rel=1e-9)


class TestComponentwiseBound:
    def test_damped_never_exceeds_series(self):
        rng = np.random.default_rng(20240915)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            prob = random_solvable(rng, n, rho_cap=0.8)
            res = picard_solve(prob, SolveOptions(tolerance=1e-10))
            eps = float(rng.uniform(1e-4, 2e-2))
            try:
                damped = componentwise_bound(prob, res.x, eps, kernel="damped")
                series = componentwise_bound(prob, res.x, eps, kernel="series")
            except InapplicableBoundError:
                continue
            assert damped <= series + 1e-12

    def test_reduces_to_classical_when_B_is_zero(self):
        A = np.array([[2.0]])
        prob = AveProblem(A, [[0.0]], [4.0])
        x_star = np.array([2.0])
        damped = componentwise_bound(prob, x_star, 0.1, kernel="damped")
        series = componentwise_bound(prob, x_star, 0.1, kernel="series")
        _, classical = classical_linear_bounds(
            A, [[0.2]], [4.0], [0.4], x_star, 0.1)
        assert damped == pytest.approx(2.0 / 9.0, abs=1e-15)
        assert series == pytest.approx(2.0 / 9.0, abs=1e-15)
        assert classical == pytest.approx(2.0 / 9.0, abs=1e-15)

    def test_conditions(self):
        with pytest.raises(InapplicableBoundError) as exc:
            componentwise_bound(
                AveProblem([[0.0]], [[1.0]], [1.0]), [1.0], 0.01)
        assert exc.value.condition == "invertible_A"

        with pytest.raises(InapplicableBoundError) as exc:
            componentwise_bound(
                AveProblem(np.eye(2), np.eye(2), np.ones(2)), [1.0, 1.0], 0.01)
        assert exc.value.condition == "spectral_radius"

        with pytest.raises(InapplicableBoundError) as exc:
            componentwise_bound(
                AveProblem([[1.0]], [[0.5]], [1.0]), [1.0], 2.0)
        assert exc.value.condition == "denominator"

    def test_argument_validation(self):
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        with pytest.raises(ValueError):
            componentwise_bound(p, [3.0], -0.1)
        with pytest.raises(ValueError):
            componentwise_bound(p, [0.0], 0.1)
        with pytest.raises(ValueError):
            componentwise_bound(p, [1.0, 2.0], 0.1)
        with pytest.raises(ValueError):
            componentwise_bound(p, [3.0], 0.1, kernel="hamming")

    def test_vertex_kernel_chain(self):
        # Observed error <= bound with the exact vertex kernel <= bound with
        # the series kernel, on envelope perturbations (200 seeded cases).
        rng = np.random.default_rng(20250406)
        tight = SolveOptions(tolerance=1e-10)
        checked = skipped = 0
        for _ in range(200):
            n = int(rng.integers(2, 9))
            prob = random_solvable(rng, n, rho_cap=0.8)
            eps = float(rng.uniform(1e-4, 5e-2))
            pert = envelope_perturbation(rng, prob, eps)
            assert not pert.componentwise_violations(prob)
            base = picard_solve(prob, tight)
            moved = picard_solve(prob.perturbed(pert.dA, pert.dB, pert.db), tight)
            assert base.converged and moved.converged
            r = float(np.linalg.norm(base.x - moved.x) / np.linalg.norm(base.x))

            mu2 = vertex_mu2(prob)
            S = np.abs(prob.A) + np.abs(prob.B)
            u = np.abs(prob.b) + S @ np.abs(base.x)
            damp = eps * np.linalg.norm(mu2 @ S, 2)
            if damp >= 1.0:
                skipped += 1
                continue
            val = (eps * np.linalg.norm(mu2 @ u, 2)
                   / ((1.0 - damp) * np.linalg.norm(base.x)))
            assert r <= val + 1e-9
            try:
                series = componentwise_bound(prob, base.x, eps, kernel="series")
            except InapplicableBoundError:
                skipped += 1
                continue
            assert val <= series + 1e-9
            checked += 1
        assert checked >= 190


class TestClassicalLinearBounds:
    def test_scalar_literal(self):
        normwise, comp = classical_linear_bounds(
            [[2.0]], [[0.2]], [4.0], [0.4], [2.0], 0.1)
        assert normwise == pytest.approx(2.0 / 9.0, abs=1e-15)
        assert comp == pytest.approx(2.0 / 9.0, abs=1e-15)

    def test_normwise_condition(self):
        with pytest.raises(InapplicableBoundError) as exc:
            classical_linear_bounds([[1.0]], [[1.0]], [1.0], [0.0], [1.0], 0.1)
        assert exc.value.condition == "normwise_denominator"

    def test_componentwise_condition(self):
        with pytest.raises(InapplicableBoundError) as exc:
            classical_linear_bounds([[1.0]], [[0.5]], [1.0], [0.0], [1.0], 1.5)
        assert exc.value.condition == "componentwise_denominator"

    def test_rejects_zero_references(self):
        with pytest.raises(ValueError):
            classical_linear_bounds([[1.0]], [[0.0]], [0.0], [0.0], [1.0], 0.1)
        with pytest.raises(ValueError):
            classical_linear_bounds([[1.0]], [[0.0]], [1.0], [0.0], [0.0], 0.1)


class TestPerturbationExperiment:
    def test_frozen_cell_table_one(self):
        problem, pert = table_one_cell(0.01)
        rec = perturbation_experiment(problem, pert)
        assert rec.n == 30
        assert rec.epsilon == 0.01
        assert rec.r == pytest.approx(0.00404409909738796, rel=1e-9)
        assert rec.w == pytest.approx(0.0842454140387942, rel=1e-9)
        assert rec.tau == pytest.approx(0.284482587726688, rel=1e-9)
        assert rec.upsilon == pytest.approx(0.0464549117216513, rel=1e-9)
        assert rec.nu == pytest.approx(0.110368928442537, rel=1e-9)
        assert rec.delta == pytest.approx(0.00479050251950588, rel=1e-9)

    def test_frozen_cell_table_two(self):
        problem = lcp_to_ave(gen_problem("tridiag", 40))
        pert = gen_perturbation("tridiag", 40, 0.015)
        rec = perturbation_experiment(problem, pert)
        assert rec.r == pytest.approx(0.00612131319617695, rel=1e-9)
        assert rec.w == pytest.approx(0.126499317001939, rel=1e-9)
        assert rec.tau == pytest.approx(0.428150650528705, rel=1e-9)
        assert rec.upsilon == pytest.approx(0.0703803207135216, rel=1e-9)
        assert rec.nu == pytest.approx(0.166309351286499, rel=1e-9)
        assert rec.delta == pytest.approx(0.00691503191675214, rel=1e-9)

    def test_delta_needs_epsilon(self):
        p = AveProblem([[2.0]], [[1.0]], [3.0])
        pert = Perturbation([[0.01]], [[0.01]], [0.01])   # no epsilon
        rec = perturbation_experiment(p, pert)
        assert rec.epsilon is None
        assert rec.delta is None
        assert rec.r is not None and rec.tau is not None

    def test_solver_failure_raises(self):
        p = AveProblem([[1.0]], [[2.0]], [1.0])
        zero = Perturbation([[0.0]], [[0.0]], [0.0])
        with pytest.raises(NonConvergenceError):
            perturbation_experiment(p, zero, SolveOptions(max_iterations=40))
