"""Statistics for recorded human-evaluation responses.

Covers the per-group response summaries, two-sample t-tests that do not
assume equal variances (Welch), and rank correlation between demographics
and response counts.  Sample variances use the n-1 denominator throughout,
which is what reproduces the published t statistics from the printed group
means and variances.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import (
    ConstantInput,
    DimensionMismatch,
    EmptyTable,
    InvalidDf,
    InvalidSummary,
    TooFewSamples,
    ValidationError,
    ZeroVariance,
)


@dataclass(frozen=True)
class ResponseTable:
    """Per-participant yes-counts for one study group.

    ``demographics`` maps a column name to one value per participant;
    values are kept as strings unless numeric.
    """

    group: str
    yes_counts: tuple[int, ...]
    n_cases: int = 10
    demographics: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "yes_counts", tuple(int(v) for v in self.yes_counts))
        if not self.yes_counts:
            raise EmptyTable(f"group {self.group!r} has no participants")
        for v in self.yes_counts:
            if not 0 <= v <= self.n_cases:
                raise ValidationError(
                    f"yes-count {v} outside [0, {self.n_cases}] in group {self.group!r}"
                )
        for name, column in self.demographics.items():
            if len(column) != len(self.yes_counts):
                raise DimensionMismatch(
                    f"demographic {name!r} has {len(column)} values for "
                    f"{len(self.yes_counts)} participants"
                )

    @property
    def no_counts(self) -> tuple[int, ...]:
        return tuple(self.n_cases - v for v in self.yes_counts)


@dataclass(frozen=True)
class ResponseSummary:
    group: str
    yes_sum: float
    yes_mean: float
    yes_median: float
    no_sum: float
    no_mean: float
    no_median: float


def summarize(table: ResponseTable) -> ResponseSummary:
    yes = np.array(table.yes_counts, dtype=float)
    no = np.array(table.no_counts, dtype=float)
    return ResponseSummary(
        table.group,
        float(yes.sum()), float(yes.mean()), float(np.median(yes)),
        float(no.sum()), float(no.mean()), float(np.median(no)),
    )


@dataclass(frozen=True)
class WelchResult:
    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    n_a: int
    n_b: int
    t_stat: float
    df: float
    p_two_tailed: float


@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    p_two_tailed: float
    n: int


def student_t_sf(t: float, df: float) -> float:
    """Upper-tail probability of Student's t.

    Uses the regularized incomplete beta identity
    ``sf(t) = I_{df/(df+t^2)}(df/2, 1/2) / 2`` for t >= 0, mirrored for
    negative t.
    """
    if not df > 0 or not np.isfinite(df):
        raise InvalidDf(f"df must be positive and finite, got {df}")
    t = float(t)
    if t != t:
        raise ValidationError("t is NaN")
    if np.isinf(t):
        return 0.0 if t > 0 else 1.0
    tail = 0.5 * float(special.betainc(df / 2.0, 0.5, df / (df + t * t)))
    return tail if t >= 0 else 1.0 - tail


def welch_from_summary(
    mean_a: float, var_a: float, n_a: int,
    mean_b: float, var_b: float, n_b: int,
) -> WelchResult:
    """Welch's t-test from summary statistics (n-1 variances).

    The degrees of freedom follow the Welch-Satterthwaite approximation
    and the p-value is two-tailed.
    """
    if n_a < 2 or n_b < 2:
        raise InvalidSummary(f"need n >= 2 per sample, got {n_a} and {n_b}")
    if var_a < 0 or var_b < 0:
        raise InvalidSummary("variances must be non-negative")
    if var_a == 0 and var_b == 0:
        raise InvalidSummary("both variances are zero")
    sa, sb = var_a / n_a, var_b / n_b
    se = np.sqrt(sa + sb)
    t_stat = (mean_a - mean_b) / se
    df = (sa + sb) ** 2 / (sa**2 / (n_a - 1) + sb**2 / (n_b - 1))
    p = 2.0 * student_t_sf(abs(t_stat), df)
    return WelchResult(
        mean_a, mean_b, var_a, var_b, n_a, n_b, float(t_stat), float(df), float(p)
    )


def welch_t_test(a, b) -> WelchResult:
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size < 2 or b.size < 2:
        raise TooFewSamples(f"need >= 2 values per sample, got {a.size} and {b.size}")
    var_a = float(a.var(ddof=1))
    var_b = float(b.var(ddof=1))
    if var_a == 0 or var_b == 0:
        raise ZeroVariance("a sample has zero variance")
    return welch_from_summary(
        float(a.mean()), var_a, a.size, float(b.mean()), var_b, b.size
    )


def _midranks(values: np.ndarray) -> np.ndarray:
    """Ranks starting at 1; tied values share the average of their ranks."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> SpearmanResult:
    """Rank correlation: Pearson correlation of mid-ranks.

    The p-value uses the t approximation with n-2 degrees of freedom,
    which is standard for sample sizes in the dozens; perfectly monotone
    data gets p = 0 by continuity.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise DimensionMismatch(f"lengths {x.size} and {y.size} differ")
    if x.size < 3:
        raise TooFewSamples(f"need >= 3 pairs, got {x.size}")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ConstantInput("rank correlation undefined for a constant input")

    rx, ry = _midranks(x), _midranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    rho = float(rx @ ry / np.sqrt((rx @ rx) * (ry @ ry)))
    rho = min(1.0, max(-1.0, rho))

    n = x.size
    if abs(rho) == 1.0:
        p = 0.0
    else:
        t = rho * np.sqrt((n - 2) / (1.0 - rho * rho))
        p = 2.0 * student_t_sf(abs(float(t)), n - 2)
    return SpearmanResult(rho, float(p), n)


# --- response CSV ingestion ---------------------------------------------

RESPONSE_COLUMNS = ("participant_id", "group", "yes_count")
DEMOGRAPHIC_COLUMNS = ("age", "gender", "education", "stem", "xai_knowledge")


def load_responses(csv_text: str, n_cases: int = 10) -> dict[str, ResponseTable]:
    """Parse the response CSV into one table per group label."""
    reader = csv.DictReader(io.StringIO(csv_text))
    if reader.fieldnames is None:
        raise EmptyTable("empty responses CSV")
    missing = [c for c in RESPONSE_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise ValidationError(f"responses CSV lacks columns: {missing}")
    demo_cols = [c for c in reader.fieldnames if c in DEMOGRAPHIC_COLUMNS]

    by_group: dict[str, dict] = {}
    for row in reader:
        group = row["group"].strip()
        entry = by_group.setdefault(
            group, {"yes": [], "demo": {c: [] for c in demo_cols}}
        )
        try:
            entry["yes"].append(int(row["yes_count"]))
        except ValueError:
            raise ValidationError(
                f"bad yes_count {row['yes_count']!r} for participant "
                f"{row['participant_id']!r}"
            ) from None
        for c in demo_cols:
            value = (row.get(c) or "").strip()
            try:
                entry["demo"][c].append(float(value))
            except ValueError:
                entry["demo"][c].append(value)

    if not by_group:
        raise EmptyTable("responses CSV has no rows")
    return {
        group: ResponseTable(group, entry["yes"], n_cases, entry["demo"])
        for group, entry in by_group.items()
    }
