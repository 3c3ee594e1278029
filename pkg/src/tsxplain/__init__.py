"""Forecast a monthly multivariate series with epsilon-SVR and explain the
predictions with two model-agnostic attribution methods, plus statistics
for human-evaluation response tables."""

from ._solver import BACKEND as SOLVER_BACKEND
from .evalstats import (
    ResponseTable,
    SpearmanResult,
    WelchResult,
    spearman,
    student_t_sf,
    summarize,
    welch_from_summary,
    welch_t_test,
)
from .explanations import Explanation, FeatureAttribution
from .lime import LimeConfig, TrainStats, compute_train_stats, explain_lime
from .model_selection import (
    GridSearchReport,
    LagSweepReport,
    ParamGrid,
    grid_search,
    lag_sweep,
    mape,
    time_series_splits,
)
from .shap import ShapConfig, ShapResult, exact_shapley, sampled_shapley, summarize_instance
from .svr import (
    KernelSpec,
    SvrHyperParams,
    SvrModel,
    kernel_eval,
    predict,
    predict_batch,
    train_svr,
)
from .timeseries import (
    ScalerParams,
    SupervisedDataset,
    TimeSeriesFrame,
    aggregate_monthly,
    apply_minmax,
    chrono_split,
    fit_minmax,
    invert_minmax,
    load_frame,
    make_supervised,
)

__version__ = "0.1.0"

__all__ = [
    "SOLVER_BACKEND",
    "ResponseTable",
    "SpearmanResult",
    "WelchResult",
    "spearman",
    "student_t_sf",
    "summarize",
    "welch_from_summary",
    "welch_t_test",
    "Explanation",
    "FeatureAttribution",
    "LimeConfig",
    "TrainStats",
    "compute_train_stats",
    "explain_lime",
    "GridSearchReport",
    "LagSweepReport",
    "ParamGrid",
    "grid_search",
    "lag_sweep",
    "mape",
    "time_series_splits",
    "ShapConfig",
    "ShapResult",
    "exact_shapley",
    "sampled_shapley",
    "summarize_instance",
    "KernelSpec",
    "SvrHyperParams",
    "SvrModel",
    "kernel_eval",
    "predict",
    "predict_batch",
    "train_svr",
    "ScalerParams",
    "SupervisedDataset",
    "TimeSeriesFrame",
    "aggregate_monthly",
    "apply_minmax",
    "chrono_split",
    "fit_minmax",
    "invert_minmax",
    "load_frame",
    "make_supervised",
]
