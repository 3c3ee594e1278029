import json

import numpy as np
import pytest

from tsxplain._solver import available_backends
from tsxplain.errors import DimensionMismatch, NoConvergence, NonFinite, TooFewRows
from tsxplain.svr import (
    KernelSpec,
    SvrHyperParams,
    fit_svr,
    kernel_eval,
    kernel_matrix,
    model_from_json,
    model_to_json,
    predict,
    predict_batch,
    train_svr,
)
from tsxplain.timeseries import SupervisedDataset

from qp_oracle import solve_box_eq_qp, svr_dual_matrices, svr_dual_objective


def random_instance(rng):
    n = int(rng.integers(4, 21))
    d = int(rng.integers(1, 5))
    X = rng.normal(size=(n, d))
    y = rng.normal(size=n)
    kind = str(rng.choice(["linear", "rbf"]))
    spec = KernelSpec(kind, float(rng.uniform(0.1, 2.0)) if kind == "rbf" else None)
    C = float(np.exp(rng.uniform(np.log(0.5), np.log(50.0))))
    epsilon = float(rng.uniform(0.0, 0.3))
    return X, y, SvrHyperParams(C, epsilon, spec)


class TestKernelEval:
    def test_rbf_zero_distance(self):
        spec = KernelSpec("rbf", gamma=3.7)
        assert kernel_eval(spec, [1.0, -2.0], [1.0, -2.0]) == 1.0

    def test_linear_dot(self):
        assert kernel_eval(KernelSpec("linear"), [1, 2], [3, 4]) == 11.0

    def test_rbf_closed_form(self):
        value = kernel_eval(KernelSpec("rbf", gamma=0.5), [0.0], [2.0])
        assert value == pytest.approx(np.exp(-2.0), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            kernel_eval(KernelSpec("linear"), [1, 2], [1, 2, 3])

    def test_matrix_agrees_with_scalar(self, rng):
        A = rng.normal(size=(5, 3))
        B = rng.normal(size=(4, 3))
        for spec in (KernelSpec("linear"), KernelSpec("rbf", gamma=0.8)):
            M = kernel_matrix(spec, A, B)
            for i in range(5):
                for j in range(4):
                    assert M[i, j] == pytest.approx(kernel_eval(spec, A[i], B[j]), abs=1e-12)


class TestTrainSvr:
    def test_line_fit(self):
        X = np.arange(10.0)[:, None]
        y = 2.0 * X[:, 0] + 1.0
        hp = SvrHyperParams(10.0, 0.01, KernelSpec("linear"))
        model = fit_svr(X, y, hp, tol=1e-8)
        np.testing.assert_allclose(predict_batch(model, X), y, atol=0.02)

    def test_flat_targets_give_constant_model(self):
        X = np.linspace(0, 1, 8)[:, None]
        y = np.full(8, 4.25)
        for spec in (KernelSpec("linear"), KernelSpec("rbf", gamma=1.0)):
            model = fit_svr(X, y, SvrHyperParams(5.0, 0.1, spec))
            assert model.dual_coeffs.size == 0
            assert model.bias == pytest.approx(4.25, abs=1e-12)
            np.testing.assert_allclose(predict_batch(model, X), 4.25, atol=1e-12)

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            fit_svr([[1.0]], [1.0], SvrHyperParams(1.0, 0.1, KernelSpec("linear")))

    def test_non_finite_rejected(self):
        with pytest.raises(NonFinite):
            fit_svr(
                [[1.0], [np.nan]], [1.0, 2.0],
                SvrHyperParams(1.0, 0.1, KernelSpec("linear")),
            )

    def test_no_convergence_carries_violation(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(30, 2))
        y = rng.normal(size=30) * 10
        hp = SvrHyperParams(50.0, 0.0, KernelSpec("rbf", gamma=2.0))
        with pytest.raises(NoConvergence) as info:
            fit_svr(X, y, hp, tol=1e-12, max_iter=3)
        assert info.value.max_violation > 0

    def test_dataset_front_end_keeps_names(self, rng):
        X = rng.normal(size=(12, 2))
        y = X[:, 0] + 2.0
        ds = SupervisedDataset(
            ("a", "b"), X, y,
            tuple(f"2020-{m:02d}" for m in range(1, 13)), 1,
        )
        model = train_svr(ds, SvrHyperParams(5.0, 0.05, KernelSpec("linear")))
        assert model.feature_names == ("a", "b")


class TestDualFeasibility:
    @pytest.mark.parametrize("seed", range(6))
    def test_box_equality_and_tube(self, seed):
        rng = np.random.default_rng(seed)
        X, y, hp = random_instance(rng)
        try:
            model = fit_svr(X, y, hp, tol=1e-6)
        except NoConvergence:
            pytest.fail("solver should converge on tiny instances")
        assert np.all(np.abs(model.dual_coeffs) <= hp.C * (1 + 1e-10))
        assert abs(model.dual_coeffs.sum()) < 1e-8
        # non-support rows sit inside the epsilon tube
        preds = predict_batch(model, X)
        sv_rows = {tuple(row) for row in model.support_vectors}
        for i in range(X.shape[0]):
            if tuple(X[i]) not in sv_rows:
                assert abs(preds[i] - y[i]) <= hp.epsilon + 1e-4 + 1e-9

    def test_predict_is_pure(self, rng):
        X = rng.normal(size=(10, 2))
        y = rng.normal(size=10)
        model = fit_svr(X, y, SvrHyperParams(2.0, 0.1, KernelSpec("rbf", gamma=0.7)))
        x = rng.normal(size=2)
        assert predict(model, x) == predict(model, x)

    def test_predict_dimension_mismatch(self, rng):
        X = rng.normal(size=(6, 3))
        model = fit_svr(X, X[:, 0], SvrHyperParams(1.0, 0.1, KernelSpec("linear")))
        with pytest.raises(DimensionMismatch):
            predict(model, [1.0, 2.0])


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(8))
    def test_objective_matches_dense_qp(self, seed):
        rng = np.random.default_rng(100 + seed)
        X, y, hp = random_instance(rng)
        K = kernel_matrix(hp.kernel, X, X)

        model = fit_svr(X, y, hp, tol=1e-9, max_iter=2_000_000)

        Q, p = svr_dual_matrices(K, y, hp.epsilon)
        z_star, obj_min, gap = solve_box_eq_qp(Q, p, hp.C)
        assert gap < 1e-7, "oracle itself must satisfy the KKT conditions"
        oracle_objective = svr_dual_objective(K, y, hp.epsilon, z_star)
        assert model.dual_objective == pytest.approx(oracle_objective, abs=1e-6)


class TestBackendParity:
    def test_backends_agree(self, rng):
        backends = available_backends()
        if "compiled" not in backends:
            pytest.skip("compiled extension not built")
        for seed in range(4):
            local = np.random.default_rng(300 + seed)
            X, y, hp = random_instance(local)
            K = kernel_matrix(hp.kernel, X, X)
            results = {}
            for name, solve in backends.items():
                z, gap, _, ok = solve(K, y, hp.C, hp.epsilon, 1e-9, 2_000_000)
                assert ok
                results[name] = svr_dual_objective(K, y, hp.epsilon, z)
            assert results["python"] == pytest.approx(results["compiled"], abs=1e-9)


class TestSerialization:
    def test_round_trip_exact(self, rng):
        X = rng.normal(size=(15, 3))
        y = np.sin(X[:, 0]) + rng.normal(0, 0.1, 15)
        hp = SvrHyperParams(7.5, 0.05, KernelSpec("rbf", gamma=0.31))
        model = fit_svr(X, y, hp, feature_names=("u", "v", "w"))
        restored = model_from_json(model_to_json(model))
        np.testing.assert_array_equal(restored.support_vectors, model.support_vectors)
        np.testing.assert_array_equal(restored.dual_coeffs, model.dual_coeffs)
        assert restored.bias == model.bias
        assert restored.kernel == model.kernel
        assert restored.C == model.C and restored.epsilon == model.epsilon
        assert restored.feature_names == model.feature_names
        x = rng.normal(size=3)
        assert predict(restored, x) == predict(model, x)

    def test_constant_model_round_trip(self):
        X = np.linspace(0, 1, 6)[:, None]
        model = fit_svr(
            X, np.full(6, 2.0), SvrHyperParams(1.0, 0.2, KernelSpec("linear")),
            feature_names=("x",),
        )
        restored = model_from_json(model_to_json(model))
        assert restored.n_features == 1
        assert predict(restored, [0.3]) == 2.0

    def test_json_fields(self, rng):
        X = rng.normal(size=(8, 2))
        model = fit_svr(X, X[:, 0], SvrHyperParams(2.0, 0.1, KernelSpec("linear")))
        obj = json.loads(model_to_json(model))
        assert set(obj) == {
            "kernel", "gamma", "C", "epsilon",
            "support_vectors", "dual_coeffs", "bias", "feature_names",
        }
