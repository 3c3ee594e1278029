"""Deterministic synthetic monthly data for pipeline runs and sanity checks.

The generator writes the ground truth it used (intercept, per-lag linear
coefficients, the one nonlinear interaction, noise level) to a sidecar
dictionary, so attribution methods can be checked against a function whose
true feature dependence is known.  A separate AR(1) generator produces a
target that depends only on its own previous value, which is what a lag
sweep should identify as a lag-1 problem.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgs, ValidationError
from .timeseries import TimeSeriesFrame, feature_name, month_index, month_label

MAX_GENERATOR_LAG = 3
_NL_SCALE = 50.0


def generate(
    seed: int,
    months: int,
    n_activity_features: int = 5,
    start_period: str = "2010-01",
    target: str = "deals",
):
    """Build a synthetic activity frame and its generating sidecar.

    Activities are seasonal sinusoids with gaussian noise; the target is an
    affine function of a few lagged activities plus one mild interaction
    term and noise, shifted to stay comfortably positive.  Identical seeds
    give identical frames.
    """
    if months < 24:
        raise InvalidArgs(f"need at least 24 months, got {months}")
    if n_activity_features < 1:
        raise InvalidArgs("need at least one activity feature")

    rng = np.random.default_rng(seed)
    features = [f"activity_{i + 1}" for i in range(n_activity_features)]
    f = n_activity_features
    horizon = months + MAX_GENERATOR_LAG   # burn-in covers the deepest lag

    activity = np.empty((horizon, f))
    t_axis = np.arange(horizon)
    for j in range(f):
        base = rng.uniform(30.0, 60.0)
        amp = rng.uniform(5.0, 12.0)
        phase = rng.uniform(0.0, 12.0)
        noise_sd = rng.uniform(1.0, 2.5)
        activity[:, j] = (
            base
            + amp * np.sin(2.0 * np.pi * (t_axis + phase) / 12.0)
            + rng.normal(0.0, noise_sd, size=horizon)
        )

    term_slots = [
        (features[min(1, f - 1)], 0),
        (features[0], 1),
        (features[f - 1], 3),
    ]
    if f >= 3:
        term_slots.append((features[2], 2))
    linear_terms = [
        {"feature": name, "lag": lag, "coef": float(rng.uniform(0.3, 0.8))}
        for name, lag in term_slots
    ]
    nonlinear = {
        "feature_a": features[0],
        "lag_a": 2,
        "feature_b": features[f - 1],
        "lag_b": 1,
        "coef": float(rng.uniform(0.1, 0.3)),
        "scale": _NL_SCALE,
    }
    noise_sd = float(rng.uniform(2.0, 4.0))

    col = {name: j for j, name in enumerate(features)}
    det = np.zeros(months)
    for t in range(months):
        row = t + MAX_GENERATOR_LAG   # activity index of period t
        acc = 0.0
        for term in linear_terms:
            acc += term["coef"] * activity[row - term["lag"], col[term["feature"]]]
        acc += (
            nonlinear["coef"]
            * activity[row - nonlinear["lag_a"], col[nonlinear["feature_a"]]]
            * activity[row - nonlinear["lag_b"], col[nonlinear["feature_b"]]]
            / nonlinear["scale"]
        )
        det[t] = acc

    intercept = float(50.0 - det.min())
    values = np.column_stack(
        [activity[MAX_GENERATOR_LAG:], intercept + det + rng.normal(0.0, noise_sd, months)]
    )

    start = month_index(start_period)
    periods = tuple(month_label(start + t) for t in range(months))
    frame = TimeSeriesFrame(periods, tuple(features) + (target,), values, target)

    sidecar = {
        "seed": int(seed),
        "months": int(months),
        "n_activity_features": int(n_activity_features),
        "start_period": month_label(start),
        "target": target,
        "intercept": intercept,
        "linear_terms": linear_terms,
        "nonlinear_term": nonlinear,
        "noise_sd": noise_sd,
    }
    return frame, sidecar


def generator_predict_fn(sidecar: dict, feature_names):
    """Noise-free target function over a supervised feature layout.

    Looks up every term of the sidecar in ``feature_names``; the dataset
    must therefore have been built with a lag depth covering the deepest
    generating term.
    """
    names = {name: i for i, name in enumerate(tuple(feature_names))}

    def locate(column, lag):
        key = feature_name(column, lag)
        if key not in names:
            raise ValidationError(
                f"feature {key!r} not in dataset layout; increase the lag depth"
            )
        return names[key]

    linear = [(locate(t["feature"], t["lag"]), t["coef"]) for t in sidecar["linear_terms"]]
    nl = sidecar["nonlinear_term"]
    nl_a = locate(nl["feature_a"], nl["lag_a"])
    nl_b = locate(nl["feature_b"], nl["lag_b"])
    nl_coef, nl_scale = nl["coef"], nl["scale"]
    intercept = sidecar["intercept"]

    def predict(x):
        x = np.asarray(x, dtype=float)
        acc = intercept
        for idx, coef in linear:
            acc += coef * x[idx]
        acc += nl_coef * x[nl_a] * x[nl_b] / nl_scale
        return float(acc)

    return predict


def generate_ar1(
    seed: int,
    months: int,
    *,
    mean: float = 100.0,
    phi: float = 0.75,
    noise_sd: float = 2.0,
    n_noise_features: int = 1,
    start_period: str = "2010-01",
    target: str = "deals",
) -> TimeSeriesFrame:
    """Target driven only by its own previous value, plus noise columns.

    Useful as a known-answer series: a lag sweep over it should prefer the
    lag-1 dataset.
    """
    if months < 24:
        raise InvalidArgs(f"need at least 24 months, got {months}")
    rng = np.random.default_rng(seed)
    y = np.empty(months)
    y[0] = mean
    for t in range(1, months):
        y[t] = mean + phi * (y[t - 1] - mean) + rng.normal(0.0, noise_sd)

    columns = [f"noise_{i + 1}" for i in range(n_noise_features)] + [target]
    blocks = [rng.uniform(20.0, 80.0, size=(months, 1)) for _ in range(n_noise_features)]
    values = np.column_stack(blocks + [y]) if blocks else y[:, None]

    start = month_index(start_period)
    periods = tuple(month_label(start + t) for t in range(months))
    return TimeSeriesFrame(periods, tuple(columns), values, target)
