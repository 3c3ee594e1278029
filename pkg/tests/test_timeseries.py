import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsxplain.errors import (
    DuplicatePeriod,
    EmptyInput,
    EmptySplit,
    LagTooLarge,
    MissingPeriod,
    NonNumericCell,
    UndefinedMean,
    UnknownColumn,
    UnknownTarget,
)
from tsxplain.timeseries import (
    SupervisedDataset,
    aggregate_monthly,
    apply_minmax,
    chrono_split,
    fit_minmax,
    invert_minmax,
    load_frame,
    make_supervised,
    month_index,
    month_label,
)

from conftest import random_frame


class TestLoadFrame:
    def test_three_row_parse(self):
        csv = "period,a,b\n2019-01,1,4\n2019-02,2,5\n2019-03,3,6\n"
        frame = load_frame(csv, target="b")
        assert frame.periods == ("2019-01", "2019-02", "2019-03")
        assert frame.columns == ("a", "b")
        np.testing.assert_array_equal(frame.values, [[1, 4], [2, 5], [3, 6]])

    def test_gap_detected(self):
        csv = "period,a\n2019-01,1\n2019-03,2\n"
        with pytest.raises(MissingPeriod):
            load_frame(csv, target="a")

    def test_blank_cell_rejected(self):
        csv = "period,a,b\n2019-01,1,\n2019-02,2,5\n"
        with pytest.raises(NonNumericCell):
            load_frame(csv, target="a")

    def test_duplicate_period(self):
        csv = "period,a\n2019-01,1\n2019-01,2\n"
        with pytest.raises(DuplicatePeriod):
            load_frame(csv, target="a")

    def test_unknown_target(self):
        with pytest.raises(UnknownTarget):
            load_frame("period,a\n2019-01,1\n2019-02,2\n", target="nope")

    def test_rows_sorted_and_dates_truncated(self):
        csv = "period,a\n2019-02-28,2\n2019-01-05,1\n"
        frame = load_frame(csv, target="a")
        assert frame.periods == ("2019-01", "2019-02")
        np.testing.assert_array_equal(frame.column_values("a"), [1, 2])


class TestAggregateMonthly:
    def test_count_reducer(self):
        events = [
            ("2019-01-03T10:00:00", "meetings", 1.0),
            ("2019-01-20T10:00:00", "meetings", 1.0),
            ("2019-02-11T10:00:00", "meetings", 1.0),
        ]
        frame = aggregate_monthly(events, "count")
        np.testing.assert_array_equal(frame.column_values("meetings"), [2, 1])

    def test_gap_month_zero_filled_for_sum(self):
        events = [
            ("2019-01-03", "hours", 2.5),
            ("2019-03-14", "hours", 4.0),
        ]
        frame = aggregate_monthly(events, "sum")
        np.testing.assert_array_equal(frame.column_values("hours"), [2.5, 0.0, 4.0])

    def test_mean_reducer(self):
        events = [("2019-05-01", "x", 3.0), ("2019-05-20", "x", 5.0)]
        frame = aggregate_monthly(events, "mean")
        np.testing.assert_array_equal(frame.column_values("x"), [4.0])

    def test_mean_over_empty_month_errors(self):
        events = [("2019-01-01", "x", 1.0), ("2019-03-01", "x", 2.0)]
        with pytest.raises(UndefinedMean):
            aggregate_monthly(events, "mean")

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            aggregate_monthly([], "sum")

    def test_utc_offset_moves_midnight_events(self):
        # 23:30 UTC on Jan 31 is already February at +2h
        events = [("2019-01-31T23:30:00", "x", 1.0)]
        frame = aggregate_monthly(events, "count", utc_offset_hours=2.0)
        assert frame.periods == ("2019-02",)
        frame_utc = aggregate_monthly(events, "count", utc_offset_hours=0.0)
        assert frame_utc.periods == ("2019-01",)


class TestMinMax:
    def test_endpoints(self, rng):
        frame = random_frame(rng, 3, 1)
        frame = frame.with_values(np.array([[2.0], [4.0], [6.0]]))
        scaled = apply_minmax(frame, fit_minmax(frame))
        np.testing.assert_allclose(scaled.column_values("col0"), [0.0, 0.5, 1.0])

    def test_constant_column_maps_to_zero(self, rng):
        frame = random_frame(rng, 2, 1).with_values(np.array([[5.0], [5.0]]))
        scaled = apply_minmax(frame, fit_minmax(frame))
        np.testing.assert_array_equal(scaled.column_values("col0"), [0.0, 0.0])

    def test_unknown_column(self, rng):
        frame = random_frame(rng, 5, 2)
        params = fit_minmax(random_frame(rng, 5, 1))
        with pytest.raises(UnknownColumn):
            apply_minmax(frame, params)

    @given(st.integers(0, 2**32 - 1), st.integers(2, 30), st.integers(1, 6))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, seed, n_periods, n_columns):
        frame = random_frame(np.random.default_rng(seed), n_periods, n_columns)
        params = fit_minmax(frame)
        restored = invert_minmax(apply_minmax(frame, params), params)
        np.testing.assert_allclose(restored.values, frame.values, atol=1e-12)


class TestMakeSupervised:
    def test_feature_count_48_months(self, rng):
        frame = random_frame(rng, 48, 6)
        ds = make_supervised(frame, 3)
        assert ds.n_rows == 45
        assert ds.n_features == 6 * 3 + 5

    def test_univariate_lag1(self, rng):
        frame = random_frame(rng, 12, 1)
        ds = make_supervised(frame, 1)
        assert ds.n_rows == 11
        assert ds.feature_names == ("col0 (t-1)",)
        np.testing.assert_array_equal(ds.X[:, 0], frame.values[:-1, 0])
        np.testing.assert_array_equal(ds.y, frame.values[1:, 0])

    def test_lag_too_large(self, rng):
        with pytest.raises(LagTooLarge):
            make_supervised(random_frame(rng, 12, 2), 12)

    def test_feature_name_layout(self, rng):
        frame = random_frame(rng, 10, 3)
        ds = make_supervised(frame, 2)
        assert ds.feature_names == (
            "col0", "col1",
            "col0 (t-1)", "col1 (t-1)", "col2 (t-1)",
            "col0 (t-2)", "col1 (t-2)", "col2 (t-2)",
        )

    @given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.integers(1, 5))
    @settings(max_examples=30, deadline=None)
    def test_feature_count_formula(self, seed, d, lag):
        frame = random_frame(np.random.default_rng(seed), lag + 3, d)
        ds = make_supervised(frame, lag)
        assert ds.n_features == d * lag + (d - 1)
        assert ds.n_rows == frame.n_periods - lag

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_lagged_cells_by_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(1, 7))
        lag = int(rng.integers(1, 5))
        n = int(rng.integers(lag + 2, 40))
        frame = random_frame(rng, n, d)
        ds = make_supervised(frame, lag)
        target_idx = frame.columns.index(frame.target)
        for i in range(ds.n_rows):
            t = i + lag
            assert ds.row_periods[i] == frame.periods[t]
            assert month_index(ds.row_periods[i]) == month_index(frame.periods[0]) + t
            assert ds.y[i] == frame.values[t, target_idx]
            for f, name in enumerate(ds.feature_names):
                if " (t-" in name:
                    column, _, k = name.rpartition(" (t-")
                    k = int(k[:-1])
                else:
                    column, k = name, 0
                j = frame.columns.index(column)
                assert ds.X[i, f] == frame.values[t - k, j]

    def test_csv_round_trip(self, rng):
        ds = make_supervised(random_frame(rng, 20, 3), 2)
        back = SupervisedDataset.from_csv(ds.to_csv())
        assert back.feature_names == ds.feature_names
        assert back.lag == ds.lag
        np.testing.assert_array_equal(back.X, ds.X)
        np.testing.assert_array_equal(back.y, ds.y)


class TestChronoSplit:
    def test_floor_arithmetic(self, rng):
        ds = make_supervised(random_frame(rng, 48, 6), 3)
        train, test = chrono_split(ds, 0.8)
        assert train.n_rows == 36
        assert test.n_rows == 9

    def test_chronology(self, rng):
        ds = make_supervised(random_frame(rng, 30, 2), 1)
        train, test = chrono_split(ds, 0.8)
        last_train = month_index(train.row_periods[-1])
        first_test = month_index(test.row_periods[0])
        assert last_train < first_test

    def test_empty_split(self, rng):
        ds = make_supervised(random_frame(rng, 2, 1), 1)
        with pytest.raises(EmptySplit):
            chrono_split(ds, 0.8)

    @given(st.integers(0, 2**32 - 1), st.floats(0.05, 0.95), st.integers(4, 40))
    @settings(max_examples=40, deadline=None)
    def test_concat_reproduces_dataset(self, seed, fraction, n_periods):
        ds = make_supervised(random_frame(np.random.default_rng(seed), n_periods, 2), 1)
        n_train = int(np.floor(fraction * ds.n_rows))
        if n_train == 0 or n_train == ds.n_rows:
            return
        train, test = chrono_split(ds, fraction)
        np.testing.assert_array_equal(np.vstack([train.X, test.X]), ds.X)
        np.testing.assert_array_equal(np.concatenate([train.y, test.y]), ds.y)
        assert train.row_periods + test.row_periods == ds.row_periods


def test_month_arithmetic_round_trip():
    for idx in (0, 11, 12, 24239, 24251):
        assert month_index(month_label(idx)) == idx
