"""Regular monthly multivariate series and their supervised reframing.

A :class:`TimeSeriesFrame` is an immutable, gap-free monthly table with one
designated target column.  The module covers ingestion (CSV text, raw event
streams), min-max scaling with exact inversion, the sliding-window reframing
that turns the series into one-step-ahead supervised rows, and the
chronological train/test split.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

import numpy as np

from .errors import (
    DuplicatePeriod,
    EmptyInput,
    EmptySplit,
    LagTooLarge,
    MissingPeriod,
    NonNumericCell,
    UndefinedMean,
    UnknownColumn,
    UnknownPeriod,
    UnknownTarget,
    ValidationError,
)

# --- month arithmetic -------------------------------------------------

def month_index(period: str) -> int:
    """Map 'YYYY-MM' (or an ISO date 'YYYY-MM-DD') to a month counter."""
    part = period.strip()
    if len(part) >= 10:
        part = part[:7]
    try:
        year_s, month_s = part.split("-")
        year, month = int(year_s), int(month_s)
    except ValueError:
        raise ValidationError(f"cannot parse period {period!r}") from None
    if not 1 <= month <= 12:
        raise ValidationError(f"month out of range in period {period!r}")
    return year * 12 + (month - 1)


def month_label(index: int) -> str:
    """Inverse of :func:`month_index`, always 'YYYY-MM'."""
    year, month = divmod(index, 12)
    return f"{year:04d}-{month + 1:02d}"


def shift_period(period: str, months: int) -> str:
    return month_label(month_index(period) + months)


# --- frame ------------------------------------------------------------

@dataclass(frozen=True)
class TimeSeriesFrame:
    """Gap-free monthly table: one row per period, one designated target.

    ``values`` has shape (n_periods, n_columns) with column order matching
    ``columns``.  All construction paths validate regularity (consecutive
    months), uniqueness of column names, target membership, and finiteness.
    """

    periods: tuple[str, ...]
    columns: tuple[str, ...]
    values: np.ndarray
    target: str

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(self.periods))
        object.__setattr__(self, "columns", tuple(self.columns))
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape != (len(self.periods), len(self.columns)):
            raise ValidationError(
                f"values shape {values.shape} does not match "
                f"{len(self.periods)} periods x {len(self.columns)} columns"
            )
        if len(self.periods) == 0:
            raise EmptyInput("frame has no rows")
        if len(set(self.columns)) != len(self.columns):
            raise ValidationError("column names are not unique")
        if self.target not in self.columns:
            raise UnknownTarget(f"target {self.target!r} not among columns {self.columns}")
        idx = [month_index(p) for p in self.periods]
        for a, b, pa, pb in zip(idx, idx[1:], self.periods, self.periods[1:]):
            if b == a:
                raise DuplicatePeriod(f"period {pb!r} appears twice")
            if b < a:
                raise ValidationError(f"periods not sorted at {pa!r} -> {pb!r}")
            if b != a + 1:
                raise MissingPeriod(f"gap between {pa!r} and {pb!r}")
        if not np.all(np.isfinite(values)):
            raise NonNumericCell("frame contains non-finite values")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def n_periods(self) -> int:
        return len(self.periods)

    def column_values(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise UnknownColumn(f"no column {name!r}")
        return self.values[:, self.columns.index(name)]

    def with_values(self, values: np.ndarray) -> "TimeSeriesFrame":
        return TimeSeriesFrame(self.periods, self.columns, values, self.target)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["period", *self.columns])
        for i, period in enumerate(self.periods):
            writer.writerow([period, *[repr(float(v)) for v in self.values[i]]])
        return out.getvalue()


def load_frame(csv_text: str, target: str) -> TimeSeriesFrame:
    """Parse CSV text (header ``period,<col>,...``) into a validated frame.

    Rows may arrive unsorted; they are ordered by period before the
    regularity check.  The period column accepts 'YYYY-MM' or a full ISO
    date, which is truncated to its month.
    """
    reader = csv.reader(io.StringIO(csv_text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("empty CSV") from None
    if len(header) < 2:
        raise ValidationError("CSV needs a period column and at least one value column")
    columns = tuple(name.strip() for name in header[1:])
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ValidationError(f"line {lineno}: expected {len(header)} cells, got {len(row)}")
        period = month_label(month_index(row[0]))
        cells = []
        for name, cell in zip(columns, row[1:]):
            try:
                value = float(cell)
            except ValueError:
                raise NonNumericCell(
                    f"line {lineno}, column {name!r}: {cell!r} is not numeric"
                ) from None
            if not np.isfinite(value):
                raise NonNumericCell(f"line {lineno}, column {name!r}: non-finite value")
            cells.append(value)
        rows.append((period, cells))
    if not rows:
        raise EmptyInput("CSV has no data rows")
    rows.sort(key=lambda item: month_index(item[0]))
    periods = tuple(period for period, _ in rows)
    values = np.array([cells for _, cells in rows], dtype=float)
    if target not in columns:
        raise UnknownTarget(f"target {target!r} not among columns {columns}")
    return TimeSeriesFrame(periods, columns, values, target)


def aggregate_monthly(
    events,
    reducer: str = "sum",
    *,
    target: str | None = None,
    utc_offset_hours: float = 2.0,
) -> TimeSeriesFrame:
    """Bucket raw (timestamp, column, value) events into a monthly frame.

    Timestamps (ISO strings or datetimes) are shifted by ``utc_offset_hours``
    before bucketing, so events near midnight land in the month of the local
    timezone rather than UTC.  Months without events become 0 for the
    ``sum``/``count`` reducers; ``mean`` over an empty month is an error.
    ``target`` defaults to the first column in sorted order.
    """
    if reducer not in ("sum", "count", "mean"):
        raise ValidationError(f"unknown reducer {reducer!r}")
    events = list(events)
    if not events:
        raise EmptyInput("no events")

    offset = timedelta(hours=utc_offset_hours)
    buckets: dict[tuple[int, str], list[float]] = {}
    names = set()
    lo = hi = None
    for ts, name, value in events:
        if isinstance(ts, str):
            ts = datetime.fromisoformat(ts)
        if ts.tzinfo is not None:
            ts = ts.astimezone(timezone.utc).replace(tzinfo=None)
        local = ts + offset
        month = local.year * 12 + (local.month - 1)
        buckets.setdefault((month, name), []).append(float(value))
        names.add(name)
        lo = month if lo is None else min(lo, month)
        hi = month if hi is None else max(hi, month)

    columns = tuple(sorted(names))
    periods = tuple(month_label(m) for m in range(lo, hi + 1))
    values = np.zeros((len(periods), len(columns)))
    for i, m in enumerate(range(lo, hi + 1)):
        for j, name in enumerate(columns):
            cell = buckets.get((m, name))
            if reducer == "count":
                values[i, j] = len(cell) if cell else 0
            elif reducer == "sum":
                values[i, j] = sum(cell) if cell else 0.0
            else:
                if not cell:
                    raise UndefinedMean(
                        f"no events for column {name!r} in {month_label(m)}"
                    )
                values[i, j] = sum(cell) / len(cell)

    return TimeSeriesFrame(periods, columns, values, target or columns[0])


# --- min-max scaling ---------------------------------------------------

@dataclass(frozen=True)
class ScalerParams:
    """Per-column (min, max) pairs, in frame column order."""

    columns: tuple[str, ...]
    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "mins", tuple(float(v) for v in self.mins))
        object.__setattr__(self, "maxs", tuple(float(v) for v in self.maxs))
        if not len(self.columns) == len(self.mins) == len(self.maxs):
            raise ValidationError("scaler fields have mismatched lengths")
        for name, lo, hi in zip(self.columns, self.mins, self.maxs):
            if lo > hi:
                raise ValidationError(f"column {name!r}: min {lo} > max {hi}")

    def for_column(self, name: str) -> tuple[float, float]:
        if name not in self.columns:
            raise UnknownColumn(f"scaler has no column {name!r}")
        i = self.columns.index(name)
        return self.mins[i], self.maxs[i]

    def to_json_dict(self) -> dict:
        return {
            "columns": [
                {"name": c, "min": lo, "max": hi}
                for c, lo, hi in zip(self.columns, self.mins, self.maxs)
            ]
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ScalerParams":
        cols = obj["columns"]
        return cls(
            tuple(c["name"] for c in cols),
            tuple(c["min"] for c in cols),
            tuple(c["max"] for c in cols),
        )


def fit_minmax(frame: TimeSeriesFrame) -> ScalerParams:
    return ScalerParams(
        frame.columns,
        tuple(frame.values.min(axis=0)),
        tuple(frame.values.max(axis=0)),
    )


def _scaler_arrays(frame: TimeSeriesFrame, params: ScalerParams):
    mins, maxs = [], []
    for name in frame.columns:
        lo, hi = params.for_column(name)
        mins.append(lo)
        maxs.append(hi)
    return np.array(mins), np.array(maxs)


def apply_minmax(frame: TimeSeriesFrame, params: ScalerParams) -> TimeSeriesFrame:
    """Scale each column to [0, 1]; constant columns map to 0.0."""
    mins, maxs = _scaler_arrays(frame, params)
    span = maxs - mins
    safe = np.where(span > 0, span, 1.0)
    scaled = (frame.values - mins) / safe
    scaled[:, span == 0] = 0.0
    return frame.with_values(scaled)


def invert_minmax(frame: TimeSeriesFrame, params: ScalerParams) -> TimeSeriesFrame:
    mins, maxs = _scaler_arrays(frame, params)
    span = maxs - mins
    return frame.with_values(frame.values * span + mins)


def scale_value(value: float, lo: float, hi: float) -> float:
    if hi > lo:
        return (value - lo) / (hi - lo)
    return 0.0


def unscale_value(value: float, lo: float, hi: float) -> float:
    return value * (hi - lo) + lo


# --- supervised reframing ----------------------------------------------

@dataclass(frozen=True)
class SupervisedDataset:
    """Lag-expanded design matrix plus the one-step-ahead target vector.

    Feature layout: the current-month block first (all columns except the
    target, in frame order), then one block per lag 1..n containing every
    column.  Current-month features keep their plain column name; lagged
    ones carry a ``" (t-k)"`` suffix.
    """

    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray
    row_periods: tuple[str, ...]
    lag: int

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "row_periods", tuple(self.row_periods))
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.ndim != 2 or X.shape != (len(self.row_periods), len(self.feature_names)):
            raise ValidationError("X shape does not match row/feature counts")
        if y.shape != (X.shape[0],):
            raise ValidationError("y length does not match row count")
        X = X.copy()
        y = y.copy()
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def row_for_period(self, period: str) -> int:
        label = month_label(month_index(period))
        try:
            return self.row_periods.index(label)
        except ValueError:
            raise UnknownPeriod(
                f"period {label!r} not in dataset range "
                f"{self.row_periods[0]}..{self.row_periods[-1]}"
            ) from None

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["period", *self.feature_names, "target"])
        for i, period in enumerate(self.row_periods):
            writer.writerow(
                [period, *[repr(float(v)) for v in self.X[i]], repr(float(self.y[i]))]
            )
        return out.getvalue()

    @classmethod
    def from_csv(cls, csv_text: str, lag: int = 0) -> "SupervisedDataset":
        reader = csv.reader(io.StringIO(csv_text))
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInput("empty CSV") from None
        if len(header) < 3 or header[0] != "period" or header[-1] != "target":
            raise ValidationError(
                "expected header 'period,<features...>,target'"
            )
        names = tuple(header[1:-1])
        periods, X, y = [], [], []
        for row in reader:
            if not row:
                continue
            periods.append(row[0])
            X.append([float(v) for v in row[1:-1]])
            y.append(float(row[-1]))
        if not periods:
            raise EmptyInput("CSV has no data rows")
        return cls(names, np.array(X), np.array(y), tuple(periods), lag or _infer_lag(names))


def _infer_lag(feature_names) -> int:
    lag = 0
    for name in feature_names:
        if name.endswith(")") and " (t-" in name:
            try:
                lag = max(lag, int(name.rsplit(" (t-", 1)[1][:-1]))
            except ValueError:
                continue
    return lag


def feature_name(column: str, lag: int) -> str:
    return column if lag == 0 else f"{column} (t-{lag})"


def make_supervised(frame: TimeSeriesFrame, lag: int) -> SupervisedDataset:
    """Sliding-window reframing: one row per period t >= lag.

    Row t carries the non-target columns at t plus every column at
    t-1..t-lag; the label is the target at t.  Chronological order is
    preserved, so downstream splits stay causal.
    """
    if lag < 1:
        raise ValidationError("lag must be >= 1")
    if lag >= frame.n_periods:
        raise LagTooLarge(f"lag {lag} >= {frame.n_periods} periods")

    target_idx = frame.columns.index(frame.target)
    other_idx = [j for j in range(len(frame.columns)) if j != target_idx]

    names = [feature_name(frame.columns[j], 0) for j in other_idx]
    for k in range(1, lag + 1):
        names.extend(feature_name(c, k) for c in frame.columns)

    n_rows = frame.n_periods - lag
    blocks = [frame.values[lag:, other_idx]]
    for k in range(1, lag + 1):
        blocks.append(frame.values[lag - k : frame.n_periods - k, :])
    X = np.hstack(blocks)
    y = frame.values[lag:, target_idx]
    return SupervisedDataset(tuple(names), X, y, frame.periods[lag:], lag)


def chrono_split(ds: SupervisedDataset, train_fraction: float):
    """First floor(f*n) rows for training, the rest for test; no shuffling."""
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n_train = int(np.floor(train_fraction * ds.n_rows))
    n_test = ds.n_rows - n_train
    if n_train == 0 or n_test == 0:
        raise EmptySplit(
            f"{ds.n_rows} rows with fraction {train_fraction} leaves an empty side"
        )

    def take(sl):
        return SupervisedDataset(
            ds.feature_names, ds.X[sl], ds.y[sl], ds.row_periods[sl], ds.lag
        )

    return take(slice(0, n_train)), take(slice(n_train, ds.n_rows))
