"""Command-line pipeline: synth, prepare, train, explain, eval.

Every subcommand accepts ``--seed``, ``--format`` and ``--out``; option
values resolve as flags > config file (``--config``, JSON object keyed by
option name) > built-in defaults.  Exit codes: 0 success, 2 validation
problem, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import evalstats, render, svr
from .errors import InvalidArgs, NumericError, TsxplainError, ValidationError
from .explanations import Explanation
from .lime import LimeConfig, compute_train_stats, condition_string, explain_lime
from .model_selection import ParamGrid, lag_sweep
from .shap import ShapConfig, default_background, sampled_shapley, summarize_instance
from .synth import generate
from .timeseries import (
    ScalerParams,
    SupervisedDataset,
    apply_minmax,
    chrono_split,
    fit_minmax,
    load_frame,
    make_supervised,
    unscale_value,
)

_DEFAULTS = {
    "seed": 0,
    "format": None,          # per-command default applied later
    "months": 120,
    "features": 5,
    "start": "2010-01",
    "target": "deals",
    "lag": 1,
    "lags": "1,2,3,4,5",
    "train_fraction": 0.8,
    "n_splits": 4,
    "top_k": 5,
    "n_samples": 5000,
    "iterations": 2000,
    "kernel_width": "auto",
    "ridge_penalty": 1.0,
    "background_limit": 100,
    "n_cases": 10,
    "scale": True,
    "denormalize": False,
    "explainer": "both",
    "test": "summary",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    common.add_argument("--format", default=None, help="output format for this command")
    common.add_argument("--out", default=None, help="output path ('-' = stdout)")
    common.add_argument("--config", default=None, help="JSON file with option defaults")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="tsxplain",
        description="Forecast a monthly series with SVR and explain its predictions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="generate synthetic monthly data")
    p.add_argument("--months", type=int, default=None)
    p.add_argument("--features", type=int, default=None, help="number of activity columns")
    p.add_argument("--start", default=None, help="first period, YYYY-MM")
    p.add_argument("--target", default=None, help="name for the target column")
    p.add_argument("--sidecar", default=None, help="path for the generator ground-truth JSON")

    p = sub.add_parser("prepare", parents=[common], help="scale and lag-expand a CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--target", default=None)
    p.add_argument("--lag", type=int, default=None)
    p.add_argument("--no-scale", dest="scale", action="store_const", const=False, default=None)
    p.add_argument("--scaler-out", default=None, help="path for the scaler JSON")

    p = sub.add_parser("train", parents=[common], help="lag sweep with grid-searched SVR")
    p.add_argument("--input", required=True)
    p.add_argument("--target", default=None)
    p.add_argument("--lags", default=None, help="comma-separated lag depths")
    p.add_argument("--grid", default=None, help="JSON file with the hyperparameter grid")
    p.add_argument("--train-fraction", type=float, default=None)
    p.add_argument("--n-splits", type=int, default=None)
    p.add_argument("--no-scale", dest="scale", action="store_const", const=False, default=None)
    p.add_argument("--model-out", default=None, help="path for the best model JSON")

    p = sub.add_parser("explain", parents=[common], help="explain one test-set prediction")
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--explainer", choices=["lime", "shap", "both"], default=None)
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--train-fraction", type=float, default=None)
    p.add_argument("--n-samples", type=int, default=None, help="surrogate perturbations")
    p.add_argument("--iterations", type=int, default=None, help="Shapley sampling iterations")
    p.add_argument("--kernel-width", default=None)
    p.add_argument("--ridge-penalty", type=float, default=None)
    p.add_argument("--background-limit", type=int, default=None)
    p.add_argument("--denormalize", action="store_const", const=True, default=None,
                   help="report feature values on the original scale (needs --scaler)")
    p.add_argument("--scaler", default=None, help="scaler JSON from prepare")

    p = sub.add_parser("eval", parents=[common], help="statistics over evaluation responses")
    p.add_argument("--responses", default=None, help="responses CSV")
    p.add_argument("--summary", default=None, help="summary-statistics JSON")
    p.add_argument("--test", choices=["summary", "welch", "spearman"], default=None)
    p.add_argument("--groups", default=None, help="comma-separated group labels")
    p.add_argument("--x", default=None, help="demographic column for spearman")
    p.add_argument("--n-cases", type=int, default=None)

    return parser


def _resolve(args) -> dict:
    """flags > config file > defaults."""
    config = {}
    if args.config:
        config = json.loads(_read(args.config))
        if not isinstance(config, dict):
            raise InvalidArgs("--config must contain a JSON object")
    resolved = {}
    for key, value in vars(args).items():
        if value is None and key in config:
            value = config[key]
        if value is None and key in _DEFAULTS:
            value = _DEFAULTS[key]
        resolved[key] = value
    return resolved


def _read(path: str) -> str:
    p = Path(path)
    if not p.exists():
        raise InvalidArgs(f"file not found: {path}")
    return p.read_text(encoding="utf-8")


def _feature_scaler(frame) -> ScalerParams:
    """Min-max params over the full frame, but with the target left as-is.

    Scaling the target would map its minimum to exactly 0, making the
    percentage-error metric undefined whenever that month lands in a
    validation or test block; identity (0, 1) bounds keep the scaler JSON
    invertible for every column.
    """
    base = fit_minmax(frame)
    mins, maxs = list(base.mins), list(base.maxs)
    i = base.columns.index(frame.target)
    mins[i], maxs[i] = 0.0, 1.0
    return ScalerParams(base.columns, tuple(mins), tuple(maxs))


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _check_format(fmt, allowed, command):
    if fmt not in allowed:
        raise InvalidArgs(
            f"--format {fmt!r} not supported by {command} (choose from {sorted(allowed)})"
        )


# --- subcommands ---------------------------------------------------------

def cmd_synth(opt) -> int:
    frame, sidecar = generate(
        opt["seed"], opt["months"], opt["features"], opt["start"], opt["target"]
    )
    out = opt["out"] or "synthetic.csv"
    if out == "-":
        raise InvalidArgs("synth writes two files; --out must be a path")
    sidecar_path = opt["sidecar"] or str(Path(out).with_suffix("")) + ".generator.json"
    Path(out).write_text(frame.to_csv(), encoding="utf-8")
    Path(sidecar_path).write_text(_json_text(sidecar), encoding="utf-8")
    sys.stdout.write(f"wrote {out} ({opt['months']} months) and {sidecar_path}\n")
    return 0


def cmd_prepare(opt) -> int:
    frame = load_frame(_read(opt["input"]), opt["target"])
    scaler = None
    if opt["scale"]:
        scaler = _feature_scaler(frame)
        frame = apply_minmax(frame, scaler)
    ds = make_supervised(frame, opt["lag"])

    out = opt["out"] or f"{Path(opt['input']).stem}_lag{opt['lag']}.csv"
    if out == "-":
        sys.stdout.write(ds.to_csv())
    else:
        Path(out).write_text(ds.to_csv(), encoding="utf-8")
    if scaler is not None:
        scaler_path = opt["scaler_out"] or str(Path(out).with_suffix("")) + ".scaler.json"
        Path(scaler_path).write_text(_json_text(scaler.to_json_dict()), encoding="utf-8")
        if out != "-":
            sys.stdout.write(f"wrote {out} and {scaler_path}\n")
    elif out != "-":
        sys.stdout.write(f"wrote {out}\n")
    return 0


def _parse_lags(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        lags = [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError:
        raise InvalidArgs(f"cannot parse lags {text!r}") from None
    if not lags:
        raise InvalidArgs("no lags given")
    return lags


def cmd_train(opt) -> int:
    fmt = opt["format"] or "json"
    _check_format(fmt, {"json", "table"}, "train")
    frame = load_frame(_read(opt["input"]), opt["target"])
    if opt["scale"]:
        frame = apply_minmax(frame, _feature_scaler(frame))
    grid = (
        ParamGrid.from_json_dict(json.loads(_read(opt["grid"])))
        if opt["grid"]
        else ParamGrid()
    )
    report = lag_sweep(
        frame,
        _parse_lags(opt["lags"]),
        grid,
        train_fraction=opt["train_fraction"],
        n_splits=opt["n_splits"],
    )
    if fmt == "table":
        _emit(render.lag_sweep_table(report), opt["out"])
    else:
        _emit(_json_text(report.to_json_dict()), opt["out"])
    if opt["model_out"]:
        Path(opt["model_out"]).write_text(
            svr.model_to_json(report.best_model) + "\n", encoding="utf-8"
        )
    return 0


def cmd_explain(opt) -> int:
    fmt = opt["format"] or "json"
    _check_format(fmt, {"json", "svg"}, "explain")
    model = svr.model_from_json(_read(opt["model"]))
    ds = SupervisedDataset.from_csv(_read(opt["dataset"]))
    if model.feature_names and tuple(model.feature_names) != ds.feature_names:
        raise InvalidArgs("dataset feature layout does not match the model")
    if ds.n_features != model.n_features:
        raise InvalidArgs(
            f"dataset has {ds.n_features} features, model expects {model.n_features}"
        )

    train, test = chrono_split(ds, opt["train_fraction"])
    row = ds.row_for_period(opt["period"])
    if row < train.n_rows:
        raise InvalidArgs(
            f"period {opt['period']} falls in the training split; "
            "explanations are for test-set predictions"
        )
    instance = ds.X[row]
    period = ds.row_periods[row]

    scaler = None
    if opt["denormalize"]:
        if not opt["scaler"]:
            raise InvalidArgs("--denormalize needs --scaler")
        scaler = ScalerParams.from_json_dict(json.loads(_read(opt["scaler"])))

    def predict_fn(x):
        return svr.predict(model, x)

    methods = ["lime", "shap"] if opt["explainer"] == "both" else [opt["explainer"]]
    explanations = {}
    for method in methods:
        if method == "lime":
            stats = compute_train_stats(train)
            width = opt["kernel_width"]
            cfg = LimeConfig(
                n_samples=opt["n_samples"],
                kernel_width=width if width == "auto" else float(width),
                top_k=opt["top_k"],
                ridge_penalty=opt["ridge_penalty"],
                seed=opt["seed"],
            )
            expl = explain_lime(predict_fn, instance, stats, cfg, period=period)
            if scaler is not None:
                expl = _rescale_conditions(expl, ds, instance, stats, scaler)
        else:
            cfg = ShapConfig(
                background=default_background(train.X, opt["background_limit"]),
                n_iterations=opt["iterations"],
                top_k=opt["top_k"],
                seed=opt["seed"],
            )
            result = sampled_shapley(predict_fn, instance, cfg)
            expl = summarize_instance(result, ds.feature_names, opt["top_k"], period=period)
        explanations[method] = expl

    if fmt == "svg":
        if len(explanations) == 1:
            _emit(render.explanation_svg(next(iter(explanations.values()))), opt["out"])
        else:
            if not opt["out"] or opt["out"] == "-":
                raise InvalidArgs("--explainer both with SVG output needs --out")
            base = Path(opt["out"])
            for method, expl in explanations.items():
                path = base.with_name(f"{base.stem}.{method}{base.suffix or '.svg'}")
                path.write_text(render.explanation_svg(expl), encoding="utf-8")
                sys.stdout.write(f"wrote {path}\n")
    else:
        if len(explanations) == 1:
            payload = next(iter(explanations.values())).to_json_dict()
        else:
            payload = {m: e.to_json_dict() for m, e in explanations.items()}
        _emit(_json_text(payload), opt["out"])
    return 0


def _rescale_conditions(explanation, ds, instance, stats, scaler):
    """Swap each condition for one expressed in unscaled units."""
    def column_of(feature: str) -> str:
        return feature.rsplit(" (t-", 1)[0]

    rebuilt = []
    for attr in explanation.attributions:
        if not attr.condition:
            rebuilt.append(attr)
            continue
        j = ds.feature_names.index(attr.feature_name)
        lo, hi = scaler.for_column(column_of(attr.feature_name))
        q1, q2, q3 = (unscale_value(q, lo, hi) for q in stats.quartiles[j])
        value = unscale_value(float(instance[j]), lo, hi)
        rebuilt.append(
            type(attr)(attr.feature_name, attr.weight, condition_string(value, q1, q2, q3))
        )
    return Explanation(
        explanation.method,
        explanation.instance_period,
        explanation.prediction,
        tuple(rebuilt),
        explanation.intercept_or_baseline,
    )


def _groups_pair(opt, available) -> tuple[str, str]:
    if not opt["groups"]:
        raise InvalidArgs("--groups A,B required for the welch test")
    labels = [g.strip() for g in str(opt["groups"]).split(",") if g.strip()]
    if len(labels) != 2:
        raise InvalidArgs(f"welch compares exactly two groups, got {labels}")
    for label in labels:
        if label not in available:
            raise InvalidArgs(f"group {label!r} not found (have {sorted(available)})")
    return labels[0], labels[1]


def cmd_eval(opt) -> int:
    fmt = opt["format"] or "table"
    _check_format(fmt, {"json", "table"}, "eval")
    test = opt["test"]

    if test == "welch" and opt["summary"]:
        summary = json.loads(_read(opt["summary"]))
        groups = summary.get("groups", {})
        a, b = _groups_pair(opt, groups)
        ga, gb = groups[a], groups[b]
        result = evalstats.welch_from_summary(
            ga["mean"], ga["variance"], int(ga["n"]),
            gb["mean"], gb["variance"], int(gb["n"]),
        )
        return _emit_welch(result, a, b, fmt, opt["out"])

    if not opt["responses"]:
        raise InvalidArgs("--responses CSV required (or --summary for welch)")
    tables = evalstats.load_responses(_read(opt["responses"]), n_cases=opt["n_cases"])

    if test == "summary":
        summaries = [evalstats.summarize(t) for t in tables.values()]
        summaries.sort(key=lambda s: s.group)
        if fmt == "table":
            _emit(render.summary_table(summaries), opt["out"])
        else:
            payload = {
                "test": "summary",
                "groups": {
                    s.group: {
                        "n_participants": len(tables[s.group].yes_counts),
                        "n_cases": tables[s.group].n_cases,
                        "yes": {"sum": s.yes_sum, "mean": s.yes_mean, "median": s.yes_median},
                        "no": {"sum": s.no_sum, "mean": s.no_mean, "median": s.no_median},
                    }
                    for s in summaries
                },
            }
            _emit(_json_text(payload), opt["out"])
        return 0

    if test == "welch":
        a, b = _groups_pair(opt, tables)
        result = evalstats.welch_t_test(tables[a].yes_counts, tables[b].yes_counts)
        return _emit_welch(result, a, b, fmt, opt["out"])

    # spearman: one group, one demographic column against yes-counts
    if not opt["groups"]:
        raise InvalidArgs("--groups <group> required for spearman")
    label = str(opt["groups"]).split(",")[0].strip()
    if label not in tables:
        raise InvalidArgs(f"group {label!r} not found (have {sorted(tables)})")
    if not opt["x"]:
        raise InvalidArgs("--x <demographic column> required for spearman")
    table = tables[label]
    if opt["x"] not in table.demographics:
        raise InvalidArgs(f"column {opt['x']!r} not in the responses CSV")
    xs = table.demographics[opt["x"]]
    if not all(isinstance(v, float) for v in xs):
        raise InvalidArgs(
            f"column {opt['x']!r} is not numeric; supply numeric codes"
        )
    result = evalstats.spearman(np.array(xs), np.array(table.yes_counts, dtype=float))
    if fmt == "table":
        _emit(render.spearman_table(result, f"{label}: {opt['x']} vs yes-count"), opt["out"])
    else:
        payload = {
            "test": "spearman",
            "group": label,
            "x": opt["x"],
            "rho": result.rho,
            "p_two_tailed": result.p_two_tailed,
            "n": result.n,
        }
        _emit(_json_text(payload), opt["out"])
    return 0


def _emit_welch(result, a, b, fmt, out) -> int:
    if fmt == "table":
        _emit(render.welch_table(result, a, b), out)
    else:
        payload = {
            "test": "welch",
            "group_a": a,
            "group_b": b,
            "mean_a": result.mean_a,
            "mean_b": result.mean_b,
            "var_a": result.var_a,
            "var_b": result.var_b,
            "n_a": result.n_a,
            "n_b": result.n_b,
            "t_stat": result.t_stat,
            "df": result.df,
            "p_two_tailed": result.p_two_tailed,
        }
        _emit(_json_text(payload), out)
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "prepare": cmd_prepare,
    "train": cmd_train,
    "explain": cmd_explain,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opt = _resolve(args)
        return _COMMANDS[args.command](opt)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TsxplainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
