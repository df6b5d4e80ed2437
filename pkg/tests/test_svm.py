import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gasgate.errors import GasgateError, SingleClassError
from gasgate.kernels import KernelSpec, kernel_matrix
from gasgate.svm import PenaltyConfig, SvmModel, fit_svm

from .support import (
    brute_force_best,
    dual_objective,
    full_alpha,
    kkt_max_residual,
    random_two_class_problem,
    slsqp_dual,
)

LINEAR = KernelSpec("linear")
RBF = KernelSpec("rbf", gamma=0.5)


def fit(X, y, kernel=LINEAR, pos=10.0, neg=10.0, **kw):
    return fit_svm(X, y, kernel, PenaltyConfig(pos, neg), **kw)


@pytest.fixture(scope="module")
def two_point_model():
    X = np.array([[-1.0], [1.0]])
    y = np.array([-1.0, 1.0])
    return fit(X, y, pos=100.0, neg=100.0)


class TestTwoPointAnalytic:
    """x = -1 labeled -1, x = +1 labeled +1: alpha = (0.5, 0.5), bias = 0."""

    @pytest.fixture
    def model(self, two_point_model):
        return two_point_model

    def test_alphas(self, model):
        assert np.abs(model.dual_coef) == pytest.approx([0.5, 0.5], abs=1e-6)

    def test_coef_signs_follow_labels(self, model):
        assert model.dual_coef[0] < 0 < model.dual_coef[1]

    def test_bias_zero(self, model):
        assert model.bias == pytest.approx(0.0, abs=1e-6)

    def test_boundary_at_origin(self, model):
        assert model.decision_value(np.array([0.0])) == pytest.approx(0.0, abs=1e-6)

    def test_margins_are_one(self, model):
        values = model.decision_values(np.array([[-1.0], [1.0]]))
        assert values == pytest.approx([-1.0, 1.0], abs=1e-6)

    def test_predictions(self, model):
        assert model.predict(np.array([[-0.3], [0.3]])).tolist() == [-1, 1]

    def test_converged(self, model):
        assert model.converged


class TestOptimality:
    def test_never_beaten_by_coarse_grid(self, rng):
        for _ in range(6):
            X, y = random_two_class_problem(rng, n_range=(2, 5), d_range=(1, 3))
            caps = np.where(y > 0, 3.0, 2.0)
            K = kernel_matrix(RBF, X)
            model = fit(X, y, RBF, pos=3.0, neg=2.0)
            smo = model.dual_objective()
            grid_best, n_points = brute_force_best(K, y, caps)
            assert n_points > 0
            assert smo >= grid_best - 1e-3

    @pytest.mark.parametrize(
        "kernel",
        [
            LINEAR,
            RBF,
            KernelSpec("polynomial", gamma=0.3, coef0=1.0, degree=2),
            KernelSpec("sigmoid", gamma=0.05, coef0=0.1),
        ],
        ids=lambda k: k.kind,
    )
    def test_matches_slsqp_reference(self, kernel, rng):
        X, y = random_two_class_problem(rng, n_range=(15, 35), d_range=(2, 4))
        caps_pos, caps_neg = 4.0, 1.5
        model = fit(X, y, kernel, pos=caps_pos, neg=caps_neg, tol=1e-6)
        K = kernel_matrix(kernel.resolved(X.shape[1]), X)
        caps = np.where(y > 0, caps_pos, caps_neg)
        reference = slsqp_dual(K, y, caps)
        assert model.dual_objective() == pytest.approx(reference, abs=1e-3)

    def test_kkt_residuals_within_tol(self, rng):
        for _ in range(4):
            X, y = random_two_class_problem(rng)
            model = fit(X, y, RBF, pos=5.0, neg=5.0, tol=1e-3)
            assert model.converged
            assert kkt_max_residual(model, X, y) <= 1e-3 + 1e-9

    def test_dual_feasibility(self, rng):
        X, y = random_two_class_problem(rng, n_range=(20, 40))
        model = fit(X, y, RBF, pos=2.0, neg=7.0)
        alpha = np.abs(model.dual_coef)
        caps = np.where(model.dual_coef > 0, 2.0, 7.0)
        assert np.all(alpha > 0)
        assert np.all(alpha <= caps * (1 + 1e-9))
        # equality constraint: sum alpha_i y_i = 0 up to accumulated rounding
        assert abs(model.dual_coef.sum()) <= 1e-9 * max(2.0, 7.0)

    def test_objective_trace_never_decreases(self, rng):
        X, y = random_two_class_problem(rng, n_range=(20, 40))
        model = fit(X, y, RBF)
        trace = model.objective_trace
        assert len(trace) >= 2
        assert np.all(np.diff(trace) >= -1e-8)

    def test_model_objective_matches_reference_formula(self, rng):
        X, y = random_two_class_problem(rng)
        model = fit(X, y, RBF, pos=3.0, neg=4.0)
        K = kernel_matrix(model.kernel, X)
        alpha = full_alpha(model, len(y))
        assert model.dual_objective() == pytest.approx(
            dual_objective(alpha, K, y), abs=1e-9
        )


class TestStructure:
    def test_label_flip_with_penalty_swap_mirrors_decision(self, rng):
        X, y = random_two_class_problem(rng, n_range=(15, 30))
        a = fit(X, y, RBF, pos=6.0, neg=2.0, tol=1e-6)
        b = fit(X, -y, RBF, pos=2.0, neg=6.0, tol=1e-6)
        probe = rng.normal(size=(8, X.shape[1]))
        assert a.decision_values(probe) == pytest.approx(
            -b.decision_values(probe), abs=1e-4
        )

    def test_identical_points_conflicting_labels_hit_the_cap(self):
        X = np.array([[0.0], [0.0]])
        y = np.array([1.0, -1.0])
        model = fit(X, y, RBF, pos=5.0, neg=5.0)
        assert np.abs(model.dual_coef) == pytest.approx([5.0, 5.0], abs=1e-9)
        assert model.bias == pytest.approx(0.0, abs=1e-9)
        # exact tie resolves to the explosion class
        assert model.predict(np.array([[0.0]])).tolist() == [1]

    def test_gamma_resolved_at_fit_time(self, featurized_small):
        _, X, exploded = featurized_small
        y = np.where(exploded, 1.0, -1.0)
        model = fit(X[:40], y[:40], KernelSpec("rbf"))
        assert model.kernel.gamma == pytest.approx(1.0 / X.shape[1])

    def test_same_seed_reproduces_fit_exactly(self, rng):
        X, y = random_two_class_problem(rng, n_range=(25, 45))
        a = fit(X, y, RBF, seed=11)
        b = fit(X, y, RBF, seed=11)
        assert np.array_equal(a.dual_coef, b.dual_coef)
        assert a.bias == b.bias
        assert np.array_equal(a.support_indices, b.support_indices)

    def test_budget_exhaustion_flags_non_convergence(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(40, 2))
        y = np.where(rng.random(40) < 0.5, 1.0, -1.0)
        y[0], y[1] = 1.0, -1.0
        model = fit(X, y, RBF, tol=1e-10, max_passes=1)
        assert not model.converged
        # the budget is passes * n joint updates
        assert len(model.objective_trace) - 1 == 40

    def test_support_vectors_subset_of_training_rows(self, rng):
        X, y = random_two_class_problem(rng, n_range=(20, 40))
        model = fit(X, y, RBF)
        assert np.array_equal(model.support_vectors, X[model.support_indices])

    def test_normalization_carried_on_model(self, featurized_small):
        params, X, exploded = featurized_small
        y = np.where(exploded, 1.0, -1.0)
        model = fit_svm(X, y, RBF, normalization=params)
        assert model.normalization is params


class TestValidation:
    def test_single_class_rejected(self):
        X = np.array([[0.0], [1.0]])
        with pytest.raises(SingleClassError):
            fit(X, np.array([1.0, 1.0]))

    def test_zero_one_labels_rejected(self):
        X = np.array([[0.0], [1.0]])
        with pytest.raises(ValueError, match=r"\+1 / -1"):
            fit(X, np.array([0.0, 1.0]))

    def test_count_mismatch(self):
        with pytest.raises(ValueError, match="sample count"):
            fit(np.array([[0.0], [1.0]]), np.array([1.0, -1.0, 1.0]))

    @pytest.mark.parametrize("tol", [0.0, -1e-3])
    def test_bad_tol(self, tol):
        X = np.array([[-1.0], [1.0]])
        with pytest.raises(ValueError, match="tol"):
            fit(X, np.array([-1.0, 1.0]), tol=tol)

    def test_bad_max_passes(self):
        X = np.array([[-1.0], [1.0]])
        with pytest.raises(ValueError, match="max_passes"):
            fit(X, np.array([-1.0, 1.0]), max_passes=0)

    @pytest.mark.parametrize("pos,neg", [(0.0, 1.0), (1.0, -2.0)])
    def test_penalties_must_be_positive(self, pos, neg):
        with pytest.raises(ValueError, match="penalties"):
            PenaltyConfig(pos, neg)

    def test_penalty_ratio(self):
        assert PenaltyConfig(60.0, 1.0).ratio == 60.0

    def test_model_rejects_empty_support(self):
        with pytest.raises(ValueError, match="at least one support vector"):
            SvmModel(
                support_vectors=np.zeros((0, 2)),
                dual_coef=np.zeros(0),
                bias=0.0,
                kernel=RBF,
                penalties=PenaltyConfig(),
            )

    def test_model_rejects_count_mismatch(self):
        with pytest.raises(ValueError, match="counts differ"):
            SvmModel(
                support_vectors=np.zeros((2, 1)),
                dual_coef=np.array([1.0]),
                bias=0.0,
                kernel=RBF,
                penalties=PenaltyConfig(),
            )

    def test_model_rejects_out_of_box_coefficients(self):
        with pytest.raises(ValueError, match="box constraints"):
            SvmModel(
                support_vectors=np.array([[0.0]]),
                dual_coef=np.array([11.0]),
                bias=0.0,
                kernel=RBF,
                penalties=PenaltyConfig(10.0, 10.0),
            )

    def test_decision_value_rejects_matrix(self):
        model = fit(np.array([[-1.0], [1.0]]), np.array([-1.0, 1.0]))
        with pytest.raises(ValueError, match="single feature vector"):
            model.decision_value(np.array([[0.0]]))


class TestPredictContract:
    def test_codomain(self, rng):
        X, y = random_two_class_problem(rng)
        model = fit(X, y, RBF)
        assert set(model.predict(rng.normal(size=(50, X.shape[1])))) <= {-1, 1}

    def test_exact_zero_decision_predicts_explosion(self):
        model = SvmModel(
            support_vectors=np.array([[0.0]]),
            dual_coef=np.array([1.0]),
            bias=-1.0,  # rbf k(0, 0) = 1, so decision at the origin is exactly 0
            kernel=KernelSpec("rbf", gamma=1.0),
            penalties=PenaltyConfig(),
        )
        assert model.decision_value(np.array([0.0])) == 0.0
        assert model.predict(np.array([[0.0]])).tolist() == [1]


@given(seed=st.integers(0, 2**31 - 1))
@settings(max_examples=15, deadline=None)
def test_random_fits_satisfy_kkt_and_feasibility(seed):
    rng = np.random.default_rng(seed)
    X, y = random_two_class_problem(rng, n_range=(8, 25), d_range=(1, 3))
    pos, neg = 1.0 + 5.0 * rng.random(), 1.0 + 5.0 * rng.random()
    model = fit_svm(X, y, RBF, PenaltyConfig(pos, neg), tol=1e-3)
    if not model.converged:
        return
    alpha = np.abs(model.dual_coef)
    caps = np.where(model.dual_coef > 0, pos, neg)
    assert np.all(alpha <= caps * (1 + 1e-9))
    assert abs(model.dual_coef.sum()) <= 1e-9 * max(pos, neg) * len(y)
    assert kkt_max_residual(model, X, y) <= 1e-3 + 1e-9
