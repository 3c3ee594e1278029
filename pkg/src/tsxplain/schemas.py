"""JSON Schemas for every machine-readable artifact the CLI emits."""

_HYPERPARAMS = {
    "type": "object",
    "properties": {
        "kernel": {"enum": ["linear", "rbf"]},
        "gamma": {"type": ["number", "null"]},
        "C": {"type": "number"},
        "epsilon": {"type": "number"},
    },
    "required": ["kernel", "gamma", "C", "epsilon"],
    "additionalProperties": False,
}

EXPLANATION_SCHEMA = {
    "type": "object",
    "properties": {
        "method": {"enum": ["lime", "shap"]},
        "period": {"type": "string"},
        "prediction": {"type": "number"},
        "baseline": {"type": "number"},
        "attributions": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "feature": {"type": "string"},
                    "weight": {"type": "number"},
                    "condition": {"type": "string"},
                },
                "required": ["feature", "weight", "condition"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["method", "period", "prediction", "baseline", "attributions"],
    "additionalProperties": False,
}

LAG_SWEEP_SCHEMA = {
    "type": "object",
    "properties": {
        "rows": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "lag": {"type": "integer"},
                    "test_mape_percent": {"type": "number"},
                    "cv_mape_percent": {"type": ["number", "null"]},
                    "best_hyperparameters": _HYPERPARAMS,
                },
                "required": [
                    "lag",
                    "test_mape_percent",
                    "cv_mape_percent",
                    "best_hyperparameters",
                ],
                "additionalProperties": False,
            },
        },
        "best_lag": {"type": "integer"},
    },
    "required": ["rows", "best_lag"],
    "additionalProperties": False,
}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "kernel": {"enum": ["linear", "rbf"]},
        "gamma": {"type": ["number", "null"]},
        "C": {"type": "number"},
        "epsilon": {"type": "number"},
        "support_vectors": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}},
        },
        "dual_coeffs": {"type": "array", "items": {"type": "number"}},
        "bias": {"type": "number"},
        "feature_names": {
            "type": ["array", "null"],
            "items": {"type": "string"},
        },
    },
    "required": [
        "kernel", "gamma", "C", "epsilon",
        "support_vectors", "dual_coeffs", "bias", "feature_names",
    ],
    "additionalProperties": False,
}

SCALER_SCHEMA = {
    "type": "object",
    "properties": {
        "columns": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "min": {"type": "number"},
                    "max": {"type": "number"},
                },
                "required": ["name", "min", "max"],
                "additionalProperties": False,
            },
        }
    },
    "required": ["columns"],
    "additionalProperties": False,
}

GENERATOR_SIDECAR_SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer"},
        "months": {"type": "integer"},
        "n_activity_features": {"type": "integer"},
        "start_period": {"type": "string"},
        "target": {"type": "string"},
        "intercept": {"type": "number"},
        "linear_terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "feature": {"type": "string"},
                    "lag": {"type": "integer"},
                    "coef": {"type": "number"},
                },
                "required": ["feature", "lag", "coef"],
                "additionalProperties": False,
            },
        },
        "nonlinear_term": {
            "type": "object",
            "properties": {
                "feature_a": {"type": "string"},
                "lag_a": {"type": "integer"},
                "feature_b": {"type": "string"},
                "lag_b": {"type": "integer"},
                "coef": {"type": "number"},
                "scale": {"type": "number"},
            },
            "required": ["feature_a", "lag_a", "feature_b", "lag_b", "coef", "scale"],
            "additionalProperties": False,
        },
        "noise_sd": {"type": "number"},
    },
    "required": [
        "seed", "months", "n_activity_features", "start_period", "target",
        "intercept", "linear_terms", "nonlinear_term", "noise_sd",
    ],
    "additionalProperties": False,
}

WELCH_SCHEMA = {
    "type": "object",
    "properties": {
        "test": {"const": "welch"},
        "group_a": {"type": "string"},
        "group_b": {"type": "string"},
        "mean_a": {"type": "number"},
        "mean_b": {"type": "number"},
        "var_a": {"type": "number"},
        "var_b": {"type": "number"},
        "n_a": {"type": "integer"},
        "n_b": {"type": "integer"},
        "t_stat": {"type": "number"},
        "df": {"type": "number"},
        "p_two_tailed": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "required": [
        "test", "group_a", "group_b", "mean_a", "mean_b", "var_a", "var_b",
        "n_a", "n_b", "t_stat", "df", "p_two_tailed",
    ],
    "additionalProperties": False,
}

SPEARMAN_SCHEMA = {
    "type": "object",
    "properties": {
        "test": {"const": "spearman"},
        "group": {"type": "string"},
        "x": {"type": "string"},
        "rho": {"type": "number", "minimum": -1, "maximum": 1},
        "p_two_tailed": {"type": "number", "minimum": 0, "maximum": 1},
        "n": {"type": "integer"},
    },
    "required": ["test", "group", "x", "rho", "p_two_tailed", "n"],
    "additionalProperties": False,
}

SUMMARY_SCHEMA = {
    "type": "object",
    "properties": {
        "test": {"const": "summary"},
        "groups": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "properties": {
                    "n_participants": {"type": "integer"},
                    "n_cases": {"type": "integer"},
                    "yes": {"$ref": "#/$defs/stats"},
                    "no": {"$ref": "#/$defs/stats"},
                },
                "required": ["n_participants", "n_cases", "yes", "no"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["test", "groups"],
    "additionalProperties": False,
    "$defs": {
        "stats": {
            "type": "object",
            "properties": {
                "sum": {"type": "number"},
                "mean": {"type": "number"},
                "median": {"type": "number"},
            },
            "required": ["sum", "mean", "median"],
            "additionalProperties": False,
        }
    },
}

SCHEMAS = {
    "explanation": EXPLANATION_SCHEMA,
    "lag_sweep": LAG_SWEEP_SCHEMA,
    "model": MODEL_SCHEMA,
    "scaler": SCALER_SCHEMA,
    "generator_sidecar": GENERATOR_SIDECAR_SCHEMA,
    "welch": WELCH_SCHEMA,
    "spearman": SPEARMAN_SCHEMA,
    "summary": SUMMARY_SCHEMA,
}


def validate_output(kind: str, obj) -> None:
    """Check an emitted object against its schema (needs ``jsonschema``)."""
    import jsonschema

    jsonschema.validate(obj, SCHEMAS[kind])
