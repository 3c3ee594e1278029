"""Explanation containers shared by both attribution methods."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class FeatureAttribution:
    """Signed contribution of one feature to one prediction.

    ``condition`` is a human-readable bracket over the instance's own value
    (quartile cut-offs from training data); the Shapley path leaves it empty.
    """

    feature_name: str
    weight: float
    condition: str = ""

    def __post_init__(self):
        if not np.isfinite(self.weight):
            raise ValidationError(f"non-finite weight for {self.feature_name!r}")

    def to_json_dict(self) -> dict:
        return {
            "feature": self.feature_name,
            "weight": self.weight,
            "condition": self.condition,
        }


@dataclass(frozen=True)
class Explanation:
    """Ranked per-feature attributions for a single prediction instance.

    ``intercept_or_baseline`` holds the surrogate intercept for the local
    linear method and the background-mean prediction for the Shapley method.
    """

    method: str
    instance_period: str
    prediction: float
    attributions: tuple[FeatureAttribution, ...]
    intercept_or_baseline: float

    def __post_init__(self):
        if self.method not in ("lime", "shap"):
            raise ValidationError(f"unknown method {self.method!r}")
        object.__setattr__(self, "attributions", tuple(self.attributions))

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "period": self.instance_period,
            "prediction": self.prediction,
            "baseline": self.intercept_or_baseline,
            "attributions": [a.to_json_dict() for a in self.attributions],
        }


def rank_attributions(attributions, top_k: int) -> tuple[FeatureAttribution, ...]:
    """Top-k by |weight| descending, feature name breaking exact ties."""
    ranked = sorted(attributions, key=lambda a: (-abs(a.weight), a.feature_name))
    return tuple(ranked[: max(0, top_k)])
