import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsxplain import model_selection
from tsxplain.errors import DimensionMismatch, NoConvergence, TooFewRows, ZeroTruth
from tsxplain.model_selection import (
    ParamGrid,
    grid_search,
    lag_sweep,
    mape,
    time_series_splits,
)
from tsxplain.svr import KernelSpec, SvrHyperParams
from tsxplain.synth import generate_ar1
from tsxplain.timeseries import SupervisedDataset

from conftest import random_frame


def line_dataset(n=20):
    x = np.arange(float(n))
    return SupervisedDataset(
        ("x",), x[:, None], 2.0 * x + 1.0,
        tuple(f"{2019 + t // 12:04d}-{t % 12 + 1:02d}" for t in range(n)), 1,
    )


class TestSplits:
    def test_ten_rows_four_splits(self):
        splits = time_series_splits(10, 4)
        observed = [(s.train, s.valid) for s in splits]
        assert observed == [
            (range(0, 2), range(2, 4)),
            (range(0, 4), range(4, 6)),
            (range(0, 6), range(6, 8)),
            (range(0, 8), range(8, 10)),
        ]

    def test_remainder_absorbed_by_last_block(self):
        splits = time_series_splits(11, 4)
        assert splits[-1].valid == range(8, 11)

    def test_too_few_rows(self):
        with pytest.raises(TooFewRows):
            time_series_splits(4, 4)

    @given(st.integers(5, 200), st.integers(2, 6))
    @settings(max_examples=120, deadline=None)
    def test_causality_everywhere(self, n_rows, n_splits):
        if n_rows < n_splits + 1:
            return
        splits = time_series_splits(n_rows, n_splits)
        assert len(splits) == n_splits
        covered = []
        for s in splits:
            assert max(s.train) < min(s.valid)
            assert s.train.start == 0
            covered.extend(s.valid)
        assert covered == list(range(splits[0].valid.start, n_rows))


class TestMape:
    def test_single_point(self):
        assert mape([100.0], [90.0]) == pytest.approx(10.0)

    def test_identity_is_zero(self):
        y = np.array([3.0, 7.0, 11.0])
        assert mape(y, y) == 0.0

    def test_two_points(self):
        assert mape([100.0, 200.0], [110.0, 180.0]) == pytest.approx(10.0)

    def test_zero_truth(self):
        with pytest.raises(ZeroTruth):
            mape([1.0, 0.0], [1.0, 1.0])

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mape([1.0], [1.0, 2.0])

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_non_negative(self, seed):
        rng = np.random.default_rng(seed)
        y = rng.uniform(0.5, 10, size=8)
        pred = rng.normal(size=8)
        assert mape(y, pred) >= 0.0


class TestParamGrid:
    def test_published_grid_count(self):
        grid = ParamGrid(
            kernels=("linear", "rbf"),
            Cs=(0.1, 1.5, 10, 25, 50),
            gammas=(1e-2, 1e-3, 1e-4, 1e-5),
            epsilons=(0.1, 0.2, 0.3, 0.5),
        )
        assert grid.candidate_count == 1 * 5 * 4 * 4 + 1 * 5 * 4
        assert len(grid.candidates()) == 100

    def test_default_grid_includes_point_one_gamma(self):
        assert 0.1 in ParamGrid().gammas

    def test_canonical_order(self):
        grid = ParamGrid(("rbf", "linear"), (10.0, 1.0), (0.5, 0.1), (0.2,))
        kinds = [c.kernel.kind for c in grid.candidates()]
        assert kinds == ["linear", "linear", "rbf", "rbf", "rbf", "rbf"]
        rbf = [c for c in grid.candidates() if c.kernel.kind == "rbf"]
        assert [(c.C, c.kernel.gamma) for c in rbf] == [
            (1.0, 0.1), (1.0, 0.5), (10.0, 0.1), (10.0, 0.5),
        ]

    def test_json_round_trip(self):
        grid = ParamGrid(("linear",), (1.0,), (0.1,), (0.2, 0.3))
        assert ParamGrid.from_json_dict(json.loads(json.dumps(grid.to_json_dict()))) == grid


class TestGridSearch:
    def test_singleton_grid(self):
        grid = ParamGrid(("linear",), (10.0,), (0.1,), (0.01,))
        report = grid_search(line_dataset(), grid, 4)
        assert report.best.params == grid.candidates()[0]
        assert len(report.candidates) == 1

    def test_linear_beats_rbf_on_line(self):
        grid = ParamGrid(("linear", "rbf"), (10.0,), (0.1,), (0.01,))
        report = grid_search(line_dataset(), grid, 4)
        assert report.best.params.kernel.kind == "linear"
        by_kind = {c.params.kernel.kind: c.mean_mape for c in report.candidates}
        assert by_kind["linear"] < by_kind["rbf"]

    def test_best_has_minimal_mean(self):
        grid = ParamGrid(("linear", "rbf"), (1.0, 10.0), (0.1, 0.01), (0.1, 0.3))
        report = grid_search(line_dataset(24), grid, 3)
        means = [c.mean_mape for c in report.candidates]
        assert report.best.mean_mape == min(means)
        assert means == sorted(means)

    def test_adding_worse_candidate_keeps_best(self):
        base = ParamGrid(("linear",), (10.0,), (0.1,), (0.01,))
        bigger = ParamGrid(("linear",), (10.0, 1e-4), (0.1,), (0.01,))
        best_small = grid_search(line_dataset(), base, 4).best.params
        best_big = grid_search(line_dataset(), bigger, 4).best.params
        assert best_small == best_big

    def test_nonconvergent_candidate_gets_infinity(self, monkeypatch):
        real_fit = model_selection.fit_svr
        doomed = SvrHyperParams(10.0, 0.3, KernelSpec("linear"))

        def flaky_fit(X, y, params, **kwargs):
            if params.epsilon == doomed.epsilon:
                raise NoConvergence("forced", max_violation=1.0)
            return real_fit(X, y, params, **kwargs)

        monkeypatch.setattr(model_selection, "fit_svr", flaky_fit)
        grid = ParamGrid(("linear",), (10.0,), (0.1,), (0.01, 0.3))
        report = grid_search(line_dataset(), grid, 4)
        assert report.best.params.epsilon == 0.01
        failed = [c for c in report.candidates if c.params.epsilon == 0.3]
        assert failed and failed[0].mean_mape == np.inf
        assert all(np.isinf(v) for v in failed[0].fold_mapes)

    def test_all_nonconvergent_raises(self, monkeypatch):
        def always_fails(*args, **kwargs):
            raise NoConvergence("forced", max_violation=1.0)

        monkeypatch.setattr(model_selection, "fit_svr", always_fails)
        grid = ParamGrid(("linear",), (10.0,), (0.1,), (0.01,))
        with pytest.raises(NoConvergence):
            grid_search(line_dataset(), grid, 4)


SMALL_GRID = ParamGrid(("linear", "rbf"), (1.0, 10.0), (0.1,), (0.1,))


class TestLagSweep:
    def test_structure_and_determinism(self, rng):
        frame = random_frame(rng, 120, 3)
        first = lag_sweep(frame, [1, 2, 3, 4, 5], SMALL_GRID)
        second = lag_sweep(frame, [1, 2, 3, 4, 5], SMALL_GRID)
        assert [row.lag for row in first.rows] == [1, 2, 3, 4, 5]
        assert first.to_json_dict() == second.to_json_dict()
        for row in first.rows:
            assert row.test_mape >= 0.0
            assert row.params in SMALL_GRID.candidates()
        best = min(first.rows, key=lambda r: r.test_mape)
        assert first.best_lag == best.lag

    def test_ar1_series_prefers_lag_one(self):
        frame = generate_ar1(13, 120)
        report = lag_sweep(frame, [1, 2, 3, 4, 5], SMALL_GRID)
        scores = {row.lag: row.test_mape for row in report.rows}
        assert scores[1] <= min(scores[lag] for lag in (2, 3, 4, 5)) + 0.25
