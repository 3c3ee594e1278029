"""Shapley-value attributions via background marginalization.

Two estimators over the same coalition game: exact enumeration of every
feature subset (tractable for small feature counts, used as the reference)
and Monte-Carlo sampling over feature permutations with one background row
per iteration.  "Feature absent" always means "value taken from a
background row", so the baseline is the mean prediction over the
background set and the attributions sum to prediction minus baseline.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyBackground,
    TooManyFeatures,
    ValidationError,
)
from .explanations import Explanation, FeatureAttribution, rank_attributions

MAX_EXACT_FEATURES = 20


@dataclass(frozen=True)
class ShapConfig:
    """Settings for the sampled estimator."""

    background: np.ndarray
    n_iterations: int = 2000
    top_k: int = 5
    seed: int = 0

    def __post_init__(self):
        bg = np.atleast_2d(np.asarray(self.background, dtype=float)).copy()
        if bg.size == 0:
            raise EmptyBackground("background matrix is empty")
        bg.flags.writeable = False
        object.__setattr__(self, "background", bg)
        if self.n_iterations < 1:
            raise ValidationError("n_iterations must be >= 1")
        if self.top_k < 1:
            raise ValidationError("top_k must be >= 1")


@dataclass(frozen=True)
class ShapResult:
    phi: np.ndarray
    baseline: float
    prediction: float

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float).copy()
        phi.flags.writeable = False
        object.__setattr__(self, "phi", phi)


def default_background(X, limit: int = 100) -> np.ndarray:
    """Training rows, thinned to a deterministic systematic sample if large."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] <= limit:
        return X.copy()
    step = X.shape[0] / limit
    idx = (np.arange(limit) * step).astype(int)
    return X[idx].copy()


def exact_shapley(predict_fn, instance, background) -> ShapResult:
    """Enumerate all coalitions; exact but exponential in feature count.

    The value of a coalition is the mean prediction over background rows
    with coalition features overridden by the instance.  Each feature's
    attribution is its Shapley-weighted average marginal contribution.
    """
    instance = np.asarray(instance, dtype=float)
    background = np.atleast_2d(np.asarray(background, dtype=float))
    if background.size == 0:
        raise EmptyBackground("background matrix is empty")
    d = instance.shape[0]
    if background.shape[1] != d:
        raise DimensionMismatch(
            f"background has {background.shape[1]} features, instance {d}"
        )
    if d > MAX_EXACT_FEATURES:
        raise TooManyFeatures(f"{d} features exceeds exact limit {MAX_EXACT_FEATURES}")

    # value of every coalition, indexed by bitmask
    values = np.empty(1 << d)
    composite = np.empty_like(background)
    for mask in range(1 << d):
        np.copyto(composite, background)
        for j in range(d):
            if mask >> j & 1:
                composite[:, j] = instance[j]
        values[mask] = np.mean([float(predict_fn(row)) for row in composite])

    # weight of a coalition of size s when adding one more feature
    weight = np.array([1.0 / (d * comb(d - 1, s)) for s in range(d)])
    sizes = np.array([bin(mask).count("1") for mask in range(1 << d)])

    phi = np.zeros(d)
    for j in range(d):
        bit = 1 << j
        without = np.array([m for m in range(1 << d) if not m & bit])
        gains = values[without | bit] - values[without]
        phi[j] = float(np.sum(weight[sizes[without]] * gains))

    return ShapResult(
        phi=phi,
        baseline=float(values[0]),
        prediction=float(predict_fn(instance)),
    )


def sampled_shapley(predict_fn, instance, cfg: ShapConfig) -> ShapResult:
    """Permutation-sampling estimate of the same attributions.

    Each iteration draws one feature permutation and one background row,
    then walks the permutation switching features from background to
    instance values; the prediction delta at each switch is that feature's
    marginal contribution for the iteration.  Deterministic given the seed.
    """
    instance = np.asarray(instance, dtype=float)
    d = instance.shape[0]
    if cfg.background.shape[1] != d:
        raise DimensionMismatch(
            f"background has {cfg.background.shape[1]} features, instance {d}"
        )
    rng = np.random.default_rng(cfg.seed)
    phi = np.zeros(d)
    for _ in range(cfg.n_iterations):
        order = rng.permutation(d)
        row = cfg.background[rng.integers(cfg.background.shape[0])]
        composite = row.copy()
        previous = float(predict_fn(composite))
        for j in order:
            composite[j] = instance[j]
            current = float(predict_fn(composite))
            phi[j] += current - previous
            previous = current
    phi /= cfg.n_iterations

    baseline = float(np.mean([float(predict_fn(row)) for row in cfg.background]))
    return ShapResult(
        phi=phi,
        baseline=baseline,
        prediction=float(predict_fn(instance)),
    )


def summarize_instance(
    result: ShapResult,
    feature_names,
    top_k: int,
    period: str = "",
) -> Explanation:
    """Fold a raw attribution vector into the shared explanation shape."""
    feature_names = tuple(feature_names)
    if len(feature_names) != result.phi.shape[0]:
        raise DimensionMismatch(
            f"{len(feature_names)} names for {result.phi.shape[0]} attributions"
        )
    attributions = [
        FeatureAttribution(name, float(value))
        for name, value in zip(feature_names, result.phi)
    ]
    return Explanation(
        method="shap",
        instance_period=period,
        prediction=result.prediction,
        attributions=rank_attributions(attributions, top_k),
        intercept_or_baseline=result.baseline,
    )
