"""Epsilon-insensitive support vector regression.

Training solves the standard dual

    maximize  -1/2 (a - a*)' K (a - a*) - eps * sum(a + a*) + y'(a - a*)
    s.t.      0 <= a, a* <= C,   sum(a - a*) = 0

with an SMO-style maximal-violating-pair method (compiled kernel when
available, numpy fallback otherwise; see :mod:`tsxplain._solver`).  Models
keep only the rows with nonzero dual coefficient, so prediction is a
kernel expansion over the support vectors plus a bias.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ._solver import smo_solve
from .errors import (
    DimensionMismatch,
    NoConvergence,
    NonFinite,
    TooFewRows,
    ValidationError,
)
from .timeseries import SupervisedDataset

DEFAULT_TOL = 1e-4
DEFAULT_MAX_ITER = 100_000

_SV_CUTOFF = 1e-12          # |dual coefficient| below this is treated as zero
_INTERIOR_CUTOFF = 1e-12    # distance from the box bounds that counts as interior


@dataclass(frozen=True)
class KernelSpec:
    """Kernel selector: 'linear' (dot product) or 'rbf' with gamma > 0."""

    kind: str
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise ValidationError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf":
            if self.gamma is None or not self.gamma > 0:
                raise ValidationError("rbf kernel needs gamma > 0")


@dataclass(frozen=True)
class SvrHyperParams:
    C: float
    epsilon: float
    kernel: KernelSpec

    def __post_init__(self):
        if not self.C > 0:
            raise ValidationError(f"C must be positive, got {self.C}")
        if self.epsilon < 0:
            raise ValidationError(f"epsilon must be >= 0, got {self.epsilon}")

    def label(self) -> str:
        parts = [f"C:{self.C:g}", f"epsilon:{self.epsilon:g}"]
        if self.kernel.kind == "rbf":
            parts.append(f"gamma:{self.kernel.gamma:g}")
        parts.append(f"kernel:{self.kernel.kind}")
        return ", ".join(parts)


def kernel_eval(spec: KernelSpec, a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatch(f"vectors of shape {a.shape} and {b.shape}")
    if spec.kind == "linear":
        return float(a @ b)
    diff = a - b
    return float(np.exp(-spec.gamma * (diff @ diff)))


def kernel_matrix(spec: KernelSpec, A, B) -> np.ndarray:
    """Pairwise kernel values, shape (len(A), len(B))."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(
            f"feature counts differ: {A.shape[1]} vs {B.shape[1]}"
        )
    if spec.kind == "linear":
        return A @ B.T
    sq = (
        (A * A).sum(axis=1)[:, None]
        + (B * B).sum(axis=1)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-spec.gamma * sq)


@dataclass(frozen=True)
class SvrModel:
    """Trained SVR: kernel expansion over support vectors plus a bias.

    ``dual_objective`` is solver metadata (the attained value of the dual
    being maximized); it is not serialized.
    """

    support_vectors: np.ndarray
    dual_coeffs: np.ndarray
    bias: float
    kernel: KernelSpec
    n_features: int
    C: float
    epsilon: float
    feature_names: tuple[str, ...] | None = None
    dual_objective: float | None = field(default=None, compare=False)

    def __post_init__(self):
        sv = np.asarray(self.support_vectors, dtype=float).reshape(-1, self.n_features)
        coef = np.asarray(self.dual_coeffs, dtype=float).reshape(-1)
        if sv.shape[0] != coef.shape[0]:
            raise ValidationError("one dual coefficient per support vector required")
        sv = sv.copy()
        coef = coef.copy()
        sv.flags.writeable = False
        coef.flags.writeable = False
        object.__setattr__(self, "support_vectors", sv)
        object.__setattr__(self, "dual_coeffs", coef)
        if self.feature_names is not None:
            object.__setattr__(self, "feature_names", tuple(self.feature_names))

    def predict(self, x) -> float:
        return predict(self, x)

    def predict_batch(self, X) -> np.ndarray:
        return predict_batch(self, X)


def predict(model: SvrModel, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n_features,):
        raise DimensionMismatch(
            f"expected vector of length {model.n_features}, got shape {x.shape}"
        )
    return float(predict_batch(model, x[None, :])[0])


def predict_batch(model: SvrModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"expected {model.n_features} features, got {X.shape[1]}"
        )
    if model.dual_coeffs.size == 0:
        return np.full(X.shape[0], model.bias)
    Kxs = kernel_matrix(model.kernel, X, model.support_vectors)
    return Kxs @ model.dual_coeffs + model.bias


def fit_svr(
    X,
    y,
    hp: SvrHyperParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    feature_names=None,
) -> SvrModel:
    """Train on a raw design matrix; see :func:`train_svr` for datasets."""
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=float)))
    y = np.ascontiguousarray(np.asarray(y, dtype=float).reshape(-1))
    n = X.shape[0]
    if y.shape[0] != n:
        raise DimensionMismatch(f"{n} rows but {y.shape[0]} targets")
    if n < 2:
        raise TooFewRows(f"need at least 2 rows, got {n}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise NonFinite("training data contains non-finite values")

    K = kernel_matrix(hp.kernel, X, X)
    z, gap, _, converged = smo_solve(K, y, hp.C, hp.epsilon, tol, int(max_iter))
    if not converged:
        raise NoConvergence(
            f"SMO did not converge within {max_iter} iterations "
            f"(max KKT violation {gap:.3e})",
            max_violation=gap,
        )

    alpha, alpha_star = z[:n], z[n:]
    beta = alpha - alpha_star
    f0 = K @ beta
    bias = _bias_from_kkt(alpha, alpha_star, y, f0, hp.C, hp.epsilon)

    # dual objective in maximize form; sum(alpha + alpha*) = sum(z)
    objective = float(-0.5 * beta @ f0 - hp.epsilon * z.sum() + y @ beta)

    keep = np.abs(beta) > _SV_CUTOFF * max(1.0, hp.C)
    return SvrModel(
        support_vectors=X[keep],
        dual_coeffs=beta[keep],
        bias=bias,
        kernel=hp.kernel,
        n_features=X.shape[1],
        C=hp.C,
        epsilon=hp.epsilon,
        feature_names=feature_names,
        dual_objective=objective,
    )


def train_svr(
    train: SupervisedDataset,
    hp: SvrHyperParams,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SvrModel:
    return fit_svr(
        train.X, train.y, hp, tol=tol, max_iter=max_iter,
        feature_names=train.feature_names,
    )


def _bias_from_kkt(alpha, alpha_star, y, f0, C, epsilon):
    """Average the bias implied by interior support vectors.

    Every interior coefficient pins the bias exactly; without any, the
    bounds only bracket it and the midpoint of the bracket is used.
    """
    cut = _INTERIOR_CUTOFF * max(1.0, C)
    lo_resid = y - f0 - epsilon   # bias candidates from the alpha side
    hi_resid = y - f0 + epsilon   # bias candidates from the alpha* side

    interior = []
    interior.extend(lo_resid[(alpha > cut) & (alpha < C - cut)])
    interior.extend(hi_resid[(alpha_star > cut) & (alpha_star < C - cut)])
    if interior:
        return float(np.mean(interior))

    lower = [np.max(lo_resid[alpha <= cut], initial=-np.inf),
             np.max(hi_resid[alpha_star >= C - cut], initial=-np.inf)]
    upper = [np.min(lo_resid[alpha >= C - cut], initial=np.inf),
             np.min(hi_resid[alpha_star <= cut], initial=np.inf)]
    lo, hi = max(lower), min(upper)
    if not np.isfinite(lo):
        return float(hi)
    if not np.isfinite(hi):
        return float(lo)
    return float(0.5 * (lo + hi))


# --- serialization -----------------------------------------------------

def model_to_json_dict(model: SvrModel) -> dict:
    return {
        "kernel": model.kernel.kind,
        "gamma": model.kernel.gamma,
        "C": model.C,
        "epsilon": model.epsilon,
        "support_vectors": [[float(v) for v in row] for row in model.support_vectors],
        "dual_coeffs": [float(v) for v in model.dual_coeffs],
        "bias": float(model.bias),
        "feature_names": list(model.feature_names) if model.feature_names else None,
    }


def model_from_json_dict(obj: dict) -> SvrModel:
    kernel = KernelSpec(obj["kernel"], obj.get("gamma"))
    sv = np.array(obj["support_vectors"], dtype=float)
    coeffs = np.array(obj["dual_coeffs"], dtype=float)
    names = obj.get("feature_names")
    if sv.size:
        n_features = sv.shape[1]
    elif names:
        n_features = len(names)   # constant model: no support vectors kept
    else:
        raise ValidationError("cannot infer feature count from model JSON")
    return SvrModel(
        support_vectors=sv.reshape(-1, n_features),
        dual_coeffs=coeffs,
        bias=float(obj["bias"]),
        kernel=kernel,
        n_features=n_features,
        C=float(obj["C"]),
        epsilon=float(obj["epsilon"]),
        feature_names=tuple(names) if names else None,
    )


def model_to_json(model: SvrModel) -> str:
    return json.dumps(model_to_json_dict(model), indent=2)


def model_from_json(text: str) -> SvrModel:
    return model_from_json_dict(json.loads(text))
