"""Deterministic artifact writers: trace CSV, summary JSON, SVG plots.

Identical inputs must produce byte-identical files: numbers are formatted
with 12 significant digits, JSON keys are sorted, and the SVG backend runs
with a fixed hash salt and no timestamp metadata.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "spinamp"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .dynamics import PolarizationTrace  # noqa: E402
from .metrics import MetricsSummary  # noqa: E402

SIGNIFICANT_DIGITS = 12


def fmt(x: float) -> str:
    return f"{x:.{SIGNIFICANT_DIGITS}g}"


def atomic_write_bytes(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f"{path.name}.tmp-{os.getpid()}")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def atomic_write_text(path: Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def flatten_params(params: dict, prefix: str = "") -> dict[str, str]:
    out = {}
    for key in sorted(params):
        value = params[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten_params(value, prefix=f"{name}."))
        elif isinstance(value, (list, tuple)):
            out[name] = ",".join(
                fmt(v) if isinstance(v, float) else str(v) for v in value
            )
        elif isinstance(value, float):
            out[name] = fmt(value)
        else:
            out[name] = str(value)
    return out


def trace_csv_text(trace: PolarizationTrace, params: dict) -> str:
    """CSV with one row per time point and the full parameter echo as comments.

    Columns: t, t_omega1, P_S, P_1..P_N, P_total, delta_P.
    """
    n = trace.n_spins
    lines = [f"# {key} = {value}" for key, value in flatten_params(params).items()]
    header = ["t", "t_omega1", "P_S"] + [f"P_{k}" for k in range(1, n + 1)]
    header += ["P_total", "delta_P"]
    lines.append(",".join(header))
    total = trace.total_i
    delta = trace.delta_p
    scaled = trace.times_scaled
    for j, t in enumerate(trace.times):
        row = [fmt(t), fmt(scaled[j])]
        row += [fmt(trace.per_spin[k, j]) for k in range(n + 1)]
        row += [fmt(total[j]), fmt(delta[j])]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_trace_csv(path: Path, trace: PolarizationTrace, params: dict) -> None:
    atomic_write_text(path, trace_csv_text(trace, params))


def summary_json_text(summary: MetricsSummary, extra: dict | None = None) -> str:
    payload = summary.to_dict()
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n"


def write_summary_json(path: Path, summary: MetricsSummary, extra: dict | None = None) -> None:
    atomic_write_text(path, summary_json_text(summary, extra))


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"not JSON serializable: {type(value)!r}")


def _save_svg(fig, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f"{path.name}.tmp-{os.getpid()}")
    fig.savefig(tmp, format="svg", metadata={"Date": None})
    plt.close(fig)
    os.replace(tmp, path)


def write_trace_plot(path: Path, trace: PolarizationTrace, title: str) -> None:
    """Per-spin polarization traces, one polyline per spin, legend by slot."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    x = trace.times_scaled
    ax.plot(x, trace.per_spin[0], label="S", linewidth=1.8, color="black")
    for k in range(1, trace.n_spins + 1):
        ax.plot(x, trace.per_spin[k], label=f"I{k}", linewidth=1.0)
    ax.set_xlabel(r"$t\,\omega_1$")
    ax.set_ylabel(r"$P_k(t)$")
    ax.set_ylim(-0.55, 0.55)
    ax.set_title(title)
    ax.legend(loc="center right", fontsize=8, ncols=2)
    ax.grid(True, alpha=0.3)
    _save_svg(fig, path)


def write_delta_p_plot(path: Path, traces: dict[str, PolarizationTrace], title: str) -> None:
    """Overlay of total-polarization changes from up to six runs."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, trace in traces.items():
        ax.plot(trace.times_scaled, trace.delta_p, label=label, linewidth=1.2)
    ax.set_xlabel(r"$t\,\omega_1$")
    ax.set_ylabel(r"$\Delta P(t)$")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    _save_svg(fig, path)


def table_csv_text(rows: list[dict]) -> str:
    if not rows:
        return "\n"
    columns = list(rows[0].keys())
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            value = row[col]
            cells.append(fmt(value) if isinstance(value, float) else str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_table_csv(path: Path, rows: list[dict]) -> None:
    atomic_write_text(path, table_csv_text(rows))


def write_table_json(path: Path, rows: list[dict]) -> None:
    atomic_write_text(
        path, json.dumps(rows, indent=2, sort_keys=True, default=_json_default) + "\n"
    )
