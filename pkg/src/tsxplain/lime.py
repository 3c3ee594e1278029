"""Local surrogate explanations for a black-box regressor.

The black box is probed on gaussian perturbations around the instance,
the probes are weighted by an RBF proximity kernel, and a ridge-penalized
weighted linear model is fit to the probed predictions.  The highest-impact
features (by coefficient times training spread) are kept, the surrogate is
refit on that subset, and each kept feature gets a quartile-bracket
condition describing where the instance's value falls in the training
distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularFit, TooFewRows, ValidationError
from .explanations import Explanation, FeatureAttribution, rank_attributions
from .timeseries import SupervisedDataset


@dataclass(frozen=True)
class LimeConfig:
    n_samples: int = 5000
    kernel_width: float | str = "auto"   # "auto" -> 0.75 * sqrt(n_features)
    top_k: int = 5
    ridge_penalty: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.top_k < 1:
            raise ValidationError("top_k must be >= 1")
        if self.n_samples < self.top_k + 1:
            raise ValidationError("n_samples must exceed top_k")
        if self.ridge_penalty < 0:
            raise ValidationError("ridge_penalty must be >= 0")
        if self.kernel_width != "auto" and not self.kernel_width > 0:
            raise ValidationError("kernel_width must be positive or 'auto'")

    def resolved_kernel_width(self, n_features: int) -> float:
        if self.kernel_width == "auto":
            return 0.75 * np.sqrt(n_features)
        return float(self.kernel_width)


@dataclass(frozen=True)
class TrainStats:
    """Per-feature location/spread/quartiles of the training design matrix."""

    feature_names: tuple[str, ...]
    means: np.ndarray
    stds: np.ndarray          # population (n-denominator) standard deviations
    quartiles: np.ndarray     # shape (n_features, 3): 25/50/75%

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        for name in ("means", "stds", "quartiles"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        d = len(self.feature_names)
        if self.means.shape != (d,) or self.stds.shape != (d,) or self.quartiles.shape != (d, 3):
            raise DimensionMismatch("stats arrays do not match feature count")

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


def compute_train_stats(train: SupervisedDataset) -> TrainStats:
    if train.n_rows < 4:
        raise TooFewRows(f"need >= 4 rows for quartiles, got {train.n_rows}")
    X = train.X
    return TrainStats(
        train.feature_names,
        X.mean(axis=0),
        X.std(axis=0),
        np.percentile(X, [25, 50, 75], axis=0).T,
    )


def perturb_samples(instance, stats: TrainStats, n_samples: int, seed: int) -> np.ndarray:
    """Instance in row 0, ``n_samples`` gaussian perturbations after it.

    Noise is scaled per feature by the training standard deviation, so
    constant features never move.  Deterministic for a given seed.
    """
    instance = np.asarray(instance, dtype=float)
    if instance.shape != (stats.n_features,):
        raise DimensionMismatch(
            f"instance has shape {instance.shape}, stats expect ({stats.n_features},)"
        )
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((n_samples, stats.n_features)) * stats.stds
    return np.vstack([instance[None, :], instance[None, :] + noise])


def proximity_weights(instance, samples, kernel_width: float) -> np.ndarray:
    """RBF closeness in [0, 1]: exp(-d^2 / width^2) with euclidean d."""
    if not kernel_width > 0:
        raise ValidationError("kernel_width must be positive")
    instance = np.asarray(instance, dtype=float)
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[1] != instance.shape[0]:
        raise DimensionMismatch(
            f"samples have {samples.shape[1]} features, instance {instance.shape[0]}"
        )
    sq = ((samples - instance) ** 2).sum(axis=1)
    return np.exp(-sq / kernel_width**2)


def _weighted_ridge(design, targets, weights, penalty):
    """Solve the penalized weighted normal equations; intercept unpenalized."""
    A = np.hstack([np.ones((design.shape[0], 1)), design])
    AtW = A.T * weights
    lhs = AtW @ A
    reg = np.eye(A.shape[1]) * penalty
    reg[0, 0] = 0.0
    sol = np.linalg.solve(lhs + reg, AtW @ targets)
    if not np.all(np.isfinite(sol)):
        raise np.linalg.LinAlgError("non-finite solution")
    return sol[0], sol[1:]


def condition_string(value: float, q1: float, q2: float, q3: float) -> str:
    """Quartile bracket for a feature value, e.g. '0.31 < x <= 0.68'."""
    if value <= q1:
        return f"x <= {q1:.4g}"
    if value <= q2:
        return f"{q1:.4g} < x <= {q2:.4g}"
    if value <= q3:
        return f"{q2:.4g} < x <= {q3:.4g}"
    return f"x > {q3:.4g}"


def explain_lime(
    predict_fn,
    instance,
    stats: TrainStats,
    cfg: LimeConfig,
    period: str = "",
) -> Explanation:
    """Explain one prediction with a locally fitted sparse linear model.

    The reported weight of a feature is its coefficient in the refit
    surrogate, so for a black box that is linear in the neighbourhood the
    weights recover the slope of each kept feature.
    """
    instance = np.asarray(instance, dtype=float)
    samples = perturb_samples(instance, stats, cfg.n_samples, cfg.seed)
    width = cfg.resolved_kernel_width(stats.n_features)
    weights = proximity_weights(instance, samples, width)
    targets = np.array([float(predict_fn(row)) for row in samples])

    penalty = cfg.ridge_penalty
    last_error = None
    for _ in range(4):
        try:
            _, coef = _weighted_ridge(samples, targets, weights, penalty)
            break
        except np.linalg.LinAlgError as exc:
            last_error = exc
            penalty = max(penalty, 1e-8) * 10.0
    else:
        raise SingularFit(f"surrogate fit failed after penalty escalation: {last_error}")

    importance = np.abs(coef) * stats.stds
    k = min(cfg.top_k, stats.n_features)
    order = sorted(range(stats.n_features), key=lambda j: (-importance[j], stats.feature_names[j]))
    chosen = sorted(order[:k])

    try:
        intercept, sub_coef = _weighted_ridge(
            samples[:, chosen], targets, weights, penalty
        )
    except np.linalg.LinAlgError as exc:
        raise SingularFit(f"surrogate refit failed: {exc}") from exc

    attributions = []
    for coef_value, j in zip(sub_coef, chosen):
        q1, q2, q3 = stats.quartiles[j]
        attributions.append(
            FeatureAttribution(
                stats.feature_names[j],
                float(coef_value),
                condition_string(instance[j], q1, q2, q3),
            )
        )

    return Explanation(
        method="lime",
        instance_period=period,
        prediction=float(predict_fn(instance)),
        attributions=rank_attributions(attributions, cfg.top_k),
        intercept_or_baseline=float(intercept),
    )
