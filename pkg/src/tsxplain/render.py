"""Text tables and minimal SVG charts for CLI output."""

from __future__ import annotations

import math

from .evalstats import ResponseSummary, SpearmanResult, WelchResult
from .explanations import Explanation
from .model_selection import LagSweepReport

# --- text tables --------------------------------------------------------

def format_table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for r, row in enumerate(cells):
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if r == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def lag_sweep_table(report: LagSweepReport) -> str:
    rows = [
        (row.lag, f"{row.test_mape:.2f} %", row.params.label())
        for row in report.rows
    ]
    table = format_table(
        ["Lag in the data set", "Mean absolute percentage error", "Best hyperparameters"],
        rows,
    )
    return table + f"Best lag by test MAPE: {report.best_lag}\n"


def welch_table(result: WelchResult, label_a: str, label_b: str) -> str:
    rows = [
        ("Mean", f"{result.mean_a:.4g}", f"{result.mean_b:.4g}"),
        ("Standard Deviation", f"{math.sqrt(result.var_a):.4g}", f"{math.sqrt(result.var_b):.4g}"),
        ("Variance", f"{result.var_a:.4g}", f"{result.var_b:.4g}"),
        ("Observations", result.n_a, result.n_b),
        ("df", f"{result.df:.3f}", ""),
        ("t Stat", f"{result.t_stat:.3f}", ""),
        ("P(T<=t) two-tail", f"{result.p_two_tailed:.5g}", ""),
    ]
    return format_table(["", label_a, label_b], rows)


def summary_table(summaries: list[ResponseSummary]) -> str:
    headers = ["", "Statistical Measure"] + [s.group for s in summaries]
    rows = [
        ("Yes", "Sum", *(f"{s.yes_sum:g}" for s in summaries)),
        ("", "Mean", *(f"{s.yes_mean:.2f}" for s in summaries)),
        ("", "Median", *(f"{s.yes_median:g}" for s in summaries)),
        ("No", "Sum", *(f"{s.no_sum:g}" for s in summaries)),
        ("", "Mean", *(f"{s.no_mean:.2f}" for s in summaries)),
        ("", "Median", *(f"{s.no_median:g}" for s in summaries)),
    ]
    return format_table(headers, rows)


def spearman_table(result: SpearmanResult, label: str) -> str:
    rows = [
        ("correlation", f"{result.rho:.3f}"),
        ("p-value", f"{result.p_two_tailed:.3g}"),
        ("n", result.n),
    ]
    return format_table([label, "value"], rows)


# --- SVG charts ----------------------------------------------------------

_POSITIVE = "#2e8b57"   # green: pushes the prediction up
_NEGATIVE = "#c0392b"   # red: pushes it down
_NEUTRAL = "#2c3e50"

_ROW_H = 34
_TOP = 76
_PLOT_W = 420
_LABEL_W = 330
_BOTTOM = 70


def _svg_header(width, height, title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<text x="16" y="24" font-size="15" font-weight="bold">{title}</text>',
    ]


def _axis_and_legend(parts, x0, y0, height, scale_max, x_label, legend_items):
    axis_y = y0 + height
    parts.append(
        f'<line x1="{x0}" y1="{axis_y}" x2="{x0 + _PLOT_W}" y2="{axis_y}" stroke="#444"/>'
    )
    mid = x0 + _PLOT_W / 2
    parts.append(f'<line x1="{mid:.1f}" y1="{y0 - 8}" x2="{mid:.1f}" y2="{axis_y}" stroke="#bbb"/>')
    for frac, value in ((0.0, -scale_max), (0.5, 0.0), (1.0, scale_max)):
        x = x0 + frac * _PLOT_W
        parts.append(
            f'<text x="{x:.1f}" y="{axis_y + 18}" text-anchor="middle">{value:.3g}</text>'
        )
    parts.append(
        f'<text x="{x0 + _PLOT_W / 2:.1f}" y="{axis_y + 38}" text-anchor="middle">'
        f"{x_label}</text>"
    )
    ly = 44
    lx = 16
    for color, text in legend_items:
        parts.append(f'<rect x="{lx}" y="{ly - 10}" width="12" height="12" fill="{color}"/>')
        parts.append(f'<text x="{lx + 18}" y="{ly}">{text}</text>')
        lx += 18 + 8 * len(text) + 28


def _scale_max(explanation):
    biggest = max((abs(a.weight) for a in explanation.attributions), default=0.0)
    return biggest if biggest > 0 else 1.0


def explanation_svg(explanation: Explanation) -> str:
    """Horizontal bar chart for the surrogate method, dot chart otherwise."""
    k = len(explanation.attributions)
    height = _TOP + k * _ROW_H + _BOTTOM
    width = _LABEL_W + _PLOT_W + 40
    title = (
        f"{explanation.method.upper()} explanation, period {explanation.instance_period or '?'}"
        f", prediction {explanation.prediction:.4g}"
    )
    parts = _svg_header(width, height, title)
    x0 = _LABEL_W
    scale_max = _scale_max(explanation)
    mid = x0 + _PLOT_W / 2
    half = _PLOT_W / 2

    for i, attr in enumerate(explanation.attributions):
        y = _TOP + i * _ROW_H
        label = attr.feature_name
        if attr.condition:
            label += f"  [{attr.condition}]"
        parts.append(
            f'<text x="{x0 - 10}" y="{y + _ROW_H / 2 + 4:.1f}" text-anchor="end">{_esc(label)}</text>'
        )
        extent = half * abs(attr.weight) / scale_max
        if explanation.method == "lime":
            color = _POSITIVE if attr.weight >= 0 else _NEGATIVE
            x = mid if attr.weight >= 0 else mid - extent
            parts.append(
                f'<rect x="{x:.1f}" y="{y + 7}" width="{max(extent, 0.5):.1f}" '
                f'height="{_ROW_H - 14}" fill="{color}"/>'
            )
        else:
            cx = mid + (half * attr.weight / scale_max)
            parts.append(
                f'<circle cx="{cx:.1f}" cy="{y + _ROW_H / 2:.1f}" r="7" fill="{_NEUTRAL}"/>'
            )
            parts.append(
                f'<line x1="{mid:.1f}" y1="{y + _ROW_H / 2:.1f}" x2="{cx:.1f}" '
                f'y2="{y + _ROW_H / 2:.1f}" stroke="{_NEUTRAL}" stroke-width="1.5"/>'
            )

    if explanation.method == "lime":
        legend = [(_POSITIVE, "positive impact"), (_NEGATIVE, "negative impact")]
        x_label = "feature contribution to the prediction"
    else:
        legend = [(_NEUTRAL, "attribution value")]
        x_label = "attribution value"
    _axis_and_legend(parts, x0, _TOP, k * _ROW_H, scale_max, x_label, legend)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
