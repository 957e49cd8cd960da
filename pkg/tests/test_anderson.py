# test_anderson.py
"""
Anderson acceleration core: least squares, the AA update, Picard collapse,
constrained/unconstrained equivalence, the multisecant view and one-step AA.
"""
import numpy as np
import pytest

from sobolev_anderson.anderson import (
    AAConfig,
    AAHistory,
    AffineProblem,
    ConvergenceRecord,
    IterationRow,
    MapProblem,
    RunStatus,
    aa_run,
    aa_step,
    constrained_alpha,
    constrained_update,
    mixed_map,
    multisecant_operator,
    one_step_aa,
    one_step_curve,
    picard_run,
    solve_gamma,
)
from sobolev_anderson.errors import (
    EmptyWindowError,
    InvalidParameterError,
    SingularGramError,
    SingularSystemError,
)
from sobolev_anderson.grid import random_orthogonal
from sobolev_anderson.norms import NormKind, WeightOperator, assemble_weight_matrix, build_weight
from sobolev_anderson.problems import build_poisson


def _scalar_problem(slope: float, offset: float) -> MapProblem:
    return MapProblem(name="scalar", n=1, fn=lambda x: slope * x + offset, is_linear=True)


def _affine_problem(n: int, lam: np.ndarray, seed: int) -> AffineProblem:
    W = random_orthogonal(n, seed)
    rng = np.random.default_rng(seed)
    return AffineProblem(name="affine", n=n, A=(W * lam) @ W.T, b=rng.standard_normal(n))


def _l2(n: int, h: float = 1.0) -> WeightOperator:
    return WeightOperator(kind=NormKind(), n=n, h=h)


def _dense_weight_inverse(s: int, n: int, h: float) -> np.ndarray:
    return np.linalg.inv(assemble_weight_matrix(s, n, h).to_dense())


class TestPicard:
    def test_scalar_sequence(self):
        record, x = picard_run(_scalar_problem(0.5, 1.0), np.zeros(1), 3)
        np.testing.assert_allclose(x, [1.75])
        np.testing.assert_allclose(record.residuals(), [1.0, 0.5, 0.25, 0.125])
        assert record.iterations == 3
        assert record.status == RunStatus.MAX_ITERS

    def test_fixed_point_start(self):
        record, x = picard_run(_scalar_problem(0.5, 1.0), np.array([2.0]), 5)
        assert np.all(record.residuals() == 0.0)
        np.testing.assert_array_equal(x, [2.0])

    def test_noncontractive_growth(self):
        record, _ = picard_run(_scalar_problem(2.0, 1.0), np.array([1.0]), 6)
        res = record.residuals()
        np.testing.assert_allclose(res[1:] / res[:-1], 2.0)

    def test_error_column(self):
        record, _ = picard_run(_scalar_problem(0.5, 1.0), np.zeros(1), 2, x_star=np.array([2.0]))
        np.testing.assert_allclose([row.err_l2 for row in record.rows], [2.0, 1.0, 0.5])

    def test_non_finite_iterate_diverges(self):
        problem = MapProblem(name="blowup", n=2, fn=lambda x: x + np.nan)
        record, _ = picard_run(problem, np.zeros(2), 10)
        assert record.status == RunStatus.DIVERGED
        assert "non-finite" in record.message

    def test_singular_solve_inside_map_diverges(self):
        calls = {"count": 0}

        def fn(x):
            calls["count"] += 1
            if calls["count"] > 2:
                raise SingularSystemError("frozen operator is singular")
            return 0.5 * x

        record, _ = picard_run(MapProblem(name="fragile", n=3, fn=fn), np.ones(3), 10)
        assert record.status == RunStatus.DIVERGED
        assert record.message == "frozen operator is singular"
        assert len(record.rows) == 2

    def test_negative_iteration_count(self):
        with pytest.raises(InvalidParameterError):
            picard_run(_scalar_problem(0.5, 1.0), np.zeros(1), -1)


class TestSolveGamma:
    def test_exact_representation(self):
        f = np.array([1.0, -2.0, 0.5])
        np.testing.assert_allclose(solve_gamma(f[:, None], f, _l2(3)), [1.0], rtol=1e-14)

    def test_single_column_projection(self):
        wop = build_weight(NormKind(s=1), 5, 0.25)
        rng = np.random.default_rng(2)
        d, f = rng.standard_normal(5), rng.standard_normal(5)
        P2 = _dense_weight_inverse(1, 5, 0.25)
        expected = (d @ P2 @ f) / (d @ P2 @ d)
        np.testing.assert_allclose(solve_gamma(d, f, wop), [expected], rtol=1e-10)

    def test_matches_dense_weighted_least_squares(self):
        rng = np.random.default_rng(42)
        n, m, s, h = 50, 6, 2, 1.0 / 49
        D, f = rng.standard_normal((n, m)), rng.standard_normal(n)
        wop = build_weight(NormKind(s=s), n, h)

        L = np.linalg.cholesky(assemble_weight_matrix(s, n, h).to_dense())
        Z, z = np.linalg.solve(L, D), np.linalg.solve(L, f)
        expected, *_ = np.linalg.lstsq(Z, z, rcond=None)
        np.testing.assert_allclose(solve_gamma(D, f, wop), expected, rtol=1e-8)

    def test_residual_is_weighted_orthogonal(self):
        rng = np.random.default_rng(7)
        n, m, h = 50, 6, 1.0 / 49
        D, f = rng.standard_normal((n, m)), rng.standard_normal(n)
        wop = build_weight(NormKind(s=2), n, h)
        gamma = solve_gamma(D, f, wop)
        P2D = wop.apply_p2(D)
        projection = h * P2D.T @ (f - D @ gamma)
        assert np.linalg.norm(projection) <= 1e-10 * h * np.linalg.norm(P2D) * np.linalg.norm(f)

    def test_weight_scale_invariance(self):
        rng = np.random.default_rng(11)
        D, f = rng.standard_normal((20, 4)), rng.standard_normal(20)
        wop = build_weight(NormKind(s=2), 20, 0.05)
        gamma = solve_gamma(D, f, wop)
        np.testing.assert_array_equal(solve_gamma(D, f, wop.model_copy(update={"h": 0.2})), gamma)
        np.testing.assert_allclose(solve_gamma(D, f, wop.model_copy(update={"h": 0.05 * 3.7})), gamma, rtol=1e-12)

    def test_duplicate_columns_use_ridge(self):
        d = np.array([1.0, 2.0, -1.0, 0.5])
        f = np.array([0.3, -1.0, 2.0, 1.0])
        gamma = solve_gamma(np.column_stack([d, d]), f, _l2(4))
        np.testing.assert_allclose(np.column_stack([d, d]) @ gamma, (d @ f) / (d @ d) * d, rtol=1e-8)

    def test_zero_window_is_empty(self):
        with pytest.raises(EmptyWindowError):
            solve_gamma(np.zeros((4, 2)), np.ones(4), _l2(4))
        with pytest.raises(EmptyWindowError):
            solve_gamma(np.zeros((4, 0)), np.ones(4), _l2(4))


class TestAndersonStep:
    def test_scalar_secant_step(self):
        problem = _scalar_problem(0.5, 1.0)
        history = AAHistory(capacity=1)
        history.push(np.zeros(1), problem(np.zeros(1)))
        history.push(np.ones(1), problem(np.ones(1)))
        x2 = aa_step(history, problem, _l2(1), AAConfig(m=1))
        np.testing.assert_array_equal(x2, [2.0])

    def test_empty_window_is_picard(self):
        problem = _scalar_problem(0.5, 1.0)
        history = AAHistory(capacity=3)
        history.push(np.array([4.0]), problem(np.array([4.0])))
        np.testing.assert_array_equal(aa_step(history, problem, _l2(1), AAConfig(m=3)), [3.0])

    def test_scalar_run_converges(self):
        record, x = aa_run(_scalar_problem(0.5, 1.0), AAConfig(m=1, tol=1e-14), x0=np.zeros(1))
        assert record.status == RunStatus.CONVERGED
        assert record.iterations <= 3
        np.testing.assert_allclose(x, [2.0], rtol=1e-15)

    def test_window_evicts_oldest(self):
        history = AAHistory(capacity=2)
        for value in (0.0, 1.0, 3.0, 6.0):
            history.push(np.array([value]), np.array([value + 1.0]))
        assert history.size == 2
        np.testing.assert_array_equal(history.X, [[2.0, 3.0]])

    def test_zero_memory_matches_picard_bitwise(self):
        problem = build_poisson("jacobi", n=63)
        x0 = problem.initial_guess()
        picard, x_picard = picard_run(problem, x0, 50)
        aa, x_aa = aa_run(problem, AAConfig(m=0, tol=1e-300, max_iters=50), x0=x0)
        np.testing.assert_array_equal(aa.residuals(), picard.residuals())
        np.testing.assert_array_equal(x_aa, x_picard)

    def test_default_label(self):
        record, _ = aa_run(build_poisson("jacobi", n=8), AAConfig(m=None, norm=NormKind(s=2), max_iters=2))
        assert record.label == "aa_hm2_minf"


class TestMixing:
    def test_unit_beta_returns_map(self):
        problem = _scalar_problem(0.5, 1.0)
        assert mixed_map(problem, 1.0) is problem

    def test_damped_map(self):
        G = mixed_map(_scalar_problem(0.5, 1.0), 0.5)
        np.testing.assert_allclose(G(np.array([2.0])), [2.0])
        np.testing.assert_allclose(G(np.array([0.0])), [0.5])

    @pytest.mark.parametrize("beta", [0.0, -0.5, 1.5])
    def test_invalid_beta(self, beta):
        with pytest.raises(InvalidParameterError):
            mixed_map(_scalar_problem(0.5, 1.0), beta)

    def test_damped_step_by_hand(self):
        problem = MapProblem(name="diag", n=2, fn=lambda x: np.array([0.5, 0.2]) * x + 1.0, is_linear=True)
        history = AAHistory(capacity=1)
        for x in (np.zeros(2), np.array([1.0, 0.0])):
            history.push(x, problem(x))
        # Δx = (1, 0), Δf = (−0.5, 0), f_1 = (0.5, 1) gives γ = −1
        np.testing.assert_allclose(aa_step(history, problem, _l2(2), AAConfig(m=1, beta=0.5)), [2.0, 0.5], rtol=1e-14)
        np.testing.assert_allclose(aa_step(history, problem, _l2(2), AAConfig(m=1)), [2.0, 1.0], rtol=1e-14)

    def test_damped_empty_window(self):
        problem = _scalar_problem(0.5, 1.0)
        history = AAHistory(capacity=2)
        history.push(np.array([4.0]), problem(np.array([4.0])))
        np.testing.assert_allclose(aa_step(history, problem, _l2(1), AAConfig(m=2, beta=0.25)), [3.75])

    def test_damped_run_is_anderson_on_mixed_map(self):
        problem = _affine_problem(20, np.linspace(0.3, 0.9, 20), seed=4)
        mixed = MapProblem(name="mixed", n=20, fn=mixed_map(problem, 0.5), is_linear=True)
        x0 = np.random.default_rng(4).standard_normal(20)
        damped, x_damped = aa_run(problem, AAConfig(m=3, beta=0.5, tol=1e-300, max_iters=8), x0=x0)
        plain, x_plain = aa_run(mixed, AAConfig(m=3, tol=1e-300, max_iters=8), x0=x0)
        np.testing.assert_allclose(x_damped, x_plain, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(0.5 * damped.residuals(), plain.residuals(), rtol=1e-8)

    def test_config_rejects_invalid_values(self):
        with pytest.raises(ValueError):
            AAConfig(beta=0.0)
        with pytest.raises(ValueError):
            AAConfig(m=-1)
        with pytest.raises(ValueError):
            AAConfig(tol=0.0)


class TestConstrainedForm:
    def test_single_column(self):
        np.testing.assert_array_equal(constrained_alpha(np.ones((3, 1)), _l2(3)), [1.0])

    def test_weights_sum_to_one(self):
        rng = np.random.default_rng(5)
        alpha = constrained_alpha(rng.standard_normal((30, 6)), build_weight(NormKind(s=1), 30, 0.1))
        assert abs(alpha.sum() - 1.0) <= 1e-14

    @pytest.mark.parametrize("beta", [1.0, 0.5])
    def test_matches_unconstrained_update(self, beta):
        # slow contraction keeps all 50 iterates well above rounding level
        n = 40
        problem = _affine_problem(n, np.linspace(0.6, 0.98, n), seed=3)
        wop = build_weight(NormKind(s=1), n, 1.0 / (n + 1))
        config = AAConfig(m=4, beta=beta)

        rng = np.random.default_rng(3)
        xs = [rng.standard_normal(n)]
        history = AAHistory(capacity=config.m)
        history.push(xs[0], problem(xs[0]))
        for k in range(50):
            x_next = aa_step(history, problem, wop, config)
            window = xs[max(0, k - config.m) :]
            expected = constrained_update(
                np.column_stack(window),
                np.column_stack([problem(x) for x in window]),
                wop,
                beta=beta,
            )
            np.testing.assert_allclose(x_next, expected, rtol=1e-10, atol=1e-10 * np.linalg.norm(expected))
            xs.append(x_next)
            history.push(x_next, problem(x_next))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            constrained_update(np.ones((3, 2)), np.ones((3, 3)), _l2(3))


class TestMultisecant:
    def test_secant_constraint(self):
        rng = np.random.default_rng(0)
        X, D = rng.standard_normal((10, 3)), rng.standard_normal((10, 3))
        S = multisecant_operator(X, D, build_weight(NormKind(s=2), 10, 0.1))
        np.testing.assert_allclose(S @ D, X + D, rtol=1e-10, atol=1e-10)

    def test_unweighted_form(self):
        rng = np.random.default_rng(1)
        X, D = rng.standard_normal((8, 2)), rng.standard_normal((8, 2))
        expected = (X + D) @ np.linalg.solve(D.T @ D, D.T)
        np.testing.assert_allclose(multisecant_operator(X, D, _l2(8)), expected, rtol=1e-10, atol=1e-12)

    def test_minimal_weighted_frobenius_norm(self):
        rng = np.random.default_rng(42)
        n, m, s, h = 12, 3, 2, 1.0 / 11
        X, D = rng.standard_normal((n, m)), rng.standard_normal((n, m))
        S = multisecant_operator(X, D, build_weight(NormKind(s=s), n, h))

        evals, evecs = np.linalg.eigh(_dense_weight_inverse(s, n, h))
        P = (evecs * np.sqrt(evals)) @ evecs.T
        P_inv = (evecs / np.sqrt(evals)) @ evecs.T
        complement = np.eye(n) - D @ np.linalg.pinv(D)
        best = np.linalg.norm(P @ S @ P_inv)
        for _ in range(50):
            perturbed = S + rng.standard_normal((n, n)) @ complement
            np.testing.assert_allclose(perturbed @ D, X + D, rtol=1e-8, atol=1e-8)
            assert np.linalg.norm(P @ perturbed @ P_inv) >= best * (1.0 - 1e-12)

    def test_rank_deficient(self):
        d = np.arange(1.0, 6.0)
        with pytest.raises(SingularGramError):
            multisecant_operator(np.ones((5, 2)), np.column_stack([d, d]), _l2(5))

    @pytest.mark.parametrize("s", [0, 2])
    def test_poisson_steps_match_multisecant_form(self, s):
        problem = build_poisson("jacobi", n=63)
        wop = build_weight(NormKind(s=s), problem.n, problem.h)
        config = AAConfig(m=10)
        rng = np.random.default_rng(s)
        x = problem.exact_solution() + rng.standard_normal(problem.n)

        history = AAHistory(capacity=config.m)
        history.push(x, problem(x))
        for _ in range(30):
            x_next = aa_step(history, problem, wop, config)
            if history.size > 0:
                S = multisecant_operator(history.X, history.D, wop)
                expected = history.prev_x + history.prev_f - S @ history.prev_f
                assert np.linalg.norm(x_next - expected) <= 1e-9 * np.linalg.norm(x_next)
            history.push(x_next, problem(x_next))


class TestOneStep:
    def test_rejects_short_history(self):
        problem = _affine_problem(6, np.linspace(0.3, 0.9, 6), seed=0)
        with pytest.raises(InvalidParameterError):
            one_step_aa(problem, np.zeros(6), 2, 3, _l2(6))
        with pytest.raises(InvalidParameterError):
            one_step_aa(problem, np.zeros(6), 2, 0, _l2(6))

    def test_full_krylov_space_gives_exact_solution(self):
        problem = _affine_problem(4, np.array([0.3, 0.5, 0.7, 0.9]), seed=4)
        x0 = np.random.default_rng(4).standard_normal(4)
        e0 = x0 - problem.exact_solution()
        e = one_step_aa(problem, x0, 4, 4, _l2(4))
        assert np.linalg.norm(e) <= 1e-9 * np.linalg.norm(e0)

    def test_curve_rows(self):
        problem = _affine_problem(16, np.linspace(0.3, 0.9, 16), seed=8)
        x_star = problem.exact_solution()
        x0 = x_star + np.random.default_rng(8).standard_normal(16)
        wop = _l2(16)
        m, k_max = 3, 12
        record = one_step_curve(problem, x0, m, wop, k_max, x_star=x_star)
        assert [row.iter for row in record.rows] == list(range(k_max + 1))

        picard, _ = picard_run(problem, x0, m, x_star=x_star)
        for i in range(m + 1):
            assert record.rows[i].err_l2 == pytest.approx(picard.rows[i].err_l2, rel=1e-14)
        for k in range(m, k_max):
            e = one_step_aa(problem, x0, k, m, wop, x_star=x_star)
            assert record.rows[k + 1].err_l2 == pytest.approx(np.linalg.norm(e), rel=1e-12)

    def test_curve_stops_on_noncontractive_map(self):
        problem = build_poisson("richardson", n=63)
        record = one_step_curve(problem, np.zeros(63), 10, _l2(63, problem.h), 120, x_star=problem.exact_solution())
        assert record.status == RunStatus.DIVERGED
        assert record.message
        assert 1 <= len(record.rows) <= 121
        assert [row.iter for row in record.rows] == list(range(len(record.rows)))
        frame = record.to_frame()
        assert np.isfinite(frame[["res_l2", "res_w", "err_l2"]].to_numpy(dtype=float)).all()

    def test_curve_on_contraction_is_not_flagged(self):
        problem = build_poisson("jacobi", n=15)
        record = one_step_curve(problem, problem.initial_guess(), 3, _l2(15, problem.h), 20)
        assert record.status == RunStatus.MAX_ITERS
        assert record.message is None
        assert len(record.rows) == 21


class TestConvergenceRecord:
    def _record(self) -> ConvergenceRecord:
        rows = [IterationRow(iter=i, res_l2=10.0**-i, res_w=0.5 * 10.0**-i) for i in range(5)]
        return ConvergenceRecord(label="test", rows=rows)

    def test_iterations_to(self):
        record = self._record()
        assert record.iterations_to(1e-2) == 2
        assert record.iterations_to(1e-9) is None
        assert ConvergenceRecord().iterations_to(0.5) is None

    def test_frame(self):
        frame = self._record().to_frame()
        assert list(frame.columns) == ["iter", "res_l2", "res_w", "err_l2"]
        assert frame["iter"].tolist() == [0, 1, 2, 3, 4]
        assert frame["err_l2"].isna().all()


class TestPoissonExperiments:
    def test_weighted_jacobi_ordering(self):
        problem = build_poisson("jacobi", n=63)
        x0 = problem.initial_guess()
        picard, _ = picard_run(problem, x0, 500, tol=1e-8)
        l2, _ = aa_run(problem, AAConfig(m=10, tol=1e-8, max_iters=500), x0=x0)
        hm2, _ = aa_run(problem, AAConfig(m=10, norm=NormKind(s=2), tol=1e-8, max_iters=500), x0=x0)

        assert picard.iterations_to(1e-8) is None
        assert l2.status == RunStatus.CONVERGED
        assert hm2.status == RunStatus.CONVERGED
        assert hm2.iterations < l2.iterations

    def test_richardson_is_rescued(self):
        problem = build_poisson("richardson", n=63)
        x0 = problem.initial_guess()
        picard, _ = picard_run(problem, x0, 100)
        res = picard.residuals()
        assert np.max(res) >= 1e6 * res[0]

        for s in (0, 2):
            record, _ = aa_run(problem, AAConfig(m=10, norm=NormKind(s=s), tol=1e-6, max_iters=500), x0=x0)
            assert record.status == RunStatus.CONVERGED
            assert record.iterations <= 500
