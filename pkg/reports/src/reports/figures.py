"""Five figures rendered straight from the simulator's file outputs.

Every data series is read back from the source CSV/JSON files; the only
numerics here are axis transforms (n ln n scalings, log axes). Output is
deterministic: fixed style, pinned SVG hash salt, no timestamps.
"""

from __future__ import annotations

import csv
import json
import math
import os
import warnings
from dataclasses import dataclass

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

FIGURE_NAMES = ("ratio_convergence", "lambda_decay", "z_cdf", "gap_hist",
                "layers")

_STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "reports",
}


class SchemaError(ValueError):
    """An input file does not match the expected column layout."""


@dataclass
class FigureSpec:
    trace: str
    summary: str
    zcdf: str
    report: str
    out_dir: str
    format: str = "svg"

    def validate(self) -> None:
        if self.format not in ("png", "svg"):
            raise SchemaError(f"format must be png or svg, got {self.format!r}")
        for path in (self.trace, self.summary, self.zcdf, self.report):
            if not os.path.exists(path):
                raise SchemaError(f"input file not found: {path}")


def _read_csv_columns(path: str, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: empty file, expected columns {required}")
        for col in required:
            if col not in header:
                raise SchemaError(f"{path}: missing column {col!r}")
        idx = {col: header.index(col) for col in required}
        rows = list(reader)
    out = {}
    for col, j in idx.items():
        try:
            out[col] = np.array([float(r[j]) for r in rows])
        except (ValueError, IndexError) as exc:
            raise SchemaError(f"{path}: bad value in column {col!r}: {exc}") from None
    return out


def _read_report(path: str) -> dict:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    for key in ("gaps", "upcrossings"):
        if key not in payload:
            raise SchemaError(f"{path}: missing column {key!r}")
    return payload


def _save(fig, spec: FigureSpec, name: str) -> str:
    path = os.path.join(spec.out_dir, f"{name}.{spec.format}")
    fig.savefig(path, metadata={"Date": None} if spec.format == "svg" else None)
    plt.close(fig)
    return path


def _fig_ratio_convergence(spec: FigureSpec) -> str:
    cols = _read_csv_columns(spec.summary, ("n", "mean_P", "mean_ratio",
                                            "q05", "q95"))
    keep = cols["n"] >= 3
    n = cols["n"][keep]
    fig, ax = plt.subplots()
    ax.fill_between(n, cols["q05"][keep], cols["q95"][keep], alpha=0.25,
                    color="tab:blue", label="5-95% band")
    ax.plot(n, cols["mean_ratio"][keep], color="tab:blue",
            label=r"mean $P_n/(n\ln n)$")
    refined = cols["mean_P"][keep] / (n * np.log(n) + n * np.log(np.log(n)))
    ax.plot(n, refined, color="tab:orange",
            label=r"mean $P_n/(n\ln n + n\ln\ln n)$")
    ax.axhline(1.0, color="k", lw=0.8, ls="--")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    ax.set_title("growth ratio convergence")
    ax.legend()
    return _save(fig, spec, "ratio_convergence")


def _fig_lambda_decay(spec: FigureSpec) -> str:
    cols = _read_csv_columns(spec.trace, ("n", "lambda"))
    fig, ax = plt.subplots()
    ax.plot(cols["n"], cols["lambda"], color="tab:green", marker=".", ms=3)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel(r"$\lambda_n$")
    ax.set_title("vacancy probability decay")
    return _save(fig, spec, "lambda_decay")


def _fig_z_cdf(spec: FigureSpec) -> str | None:
    cols = _read_csv_columns(spec.zcdf, ("z", "F"))
    if len(cols["z"]) == 0:
        warnings.warn(f"{spec.zcdf}: no data rows, skipping z_cdf figure")
        return None
    fig, ax = plt.subplots()
    ax.step(cols["z"], cols["F"], where="post", color="tab:purple")
    ax.set_xlabel("z")
    ax.set_ylabel("F(z)")
    ax.set_ylim(0, 1.05)
    ax.set_title(r"empirical CDF of $Z_n = (P_n - n\ln n - n\ln\ln n)/n$")
    return _save(fig, spec, "z_cdf")


def _fig_gap_hist(spec: FigureSpec) -> str:
    payload = _read_report(spec.report)
    ratios = [r for _, r in payload["gaps"]]
    fig, ax = plt.subplots()
    ax.hist(ratios, bins=20, color="tab:red", alpha=0.8)
    ax.axvline(3.0, color="k", lw=1.2, label="ratio = 3")
    ax.set_xlabel(r"gap$_n$ / $\ln^2 P$")
    ax.set_ylabel("checkpoints")
    ax.set_title("gap ratio distribution")
    ax.legend()
    return _save(fig, spec, "gap_hist")


def _fig_layers(spec: FigureSpec) -> str:
    cols = _read_csv_columns(spec.trace, ("n", "P"))
    payload = _read_report(spec.report)
    a = float(payload["upcrossings"].get("a", 0.5))
    keep = cols["n"] >= 3
    n = cols["n"][keep]
    ratio = cols["P"][keep] / (n * np.log(n))
    fig, ax = plt.subplots()
    ax.plot(n, ratio, color="tab:blue", label=r"$P_n/(n\ln n)$")
    for k in range(1, 5):
        level = 1.0 + k * a
        # Topmost layer drawn as the blocking black bound.
        black = k == 4
        ax.axhline(level, color="k" if black else "gray",
                   lw=1.6 if black else 0.8, ls="-" if black else ":")
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    ax.set_title(f"onion layers at 1 + ka, a = {a:g}")
    ax.legend()
    return _save(fig, spec, "layers")


def render_all(spec: FigureSpec) -> list[str]:
    """Render the five figures into spec.out_dir; returns written paths
    (z_cdf is skipped, with a warning, when its input holds no rows)."""
    spec.validate()
    os.makedirs(spec.out_dir, exist_ok=True)
    written: list[str] = []
    with plt.rc_context(_STYLE):
        for fn in (_fig_ratio_convergence, _fig_lambda_decay, _fig_z_cdf,
                   _fig_gap_hist, _fig_layers):
            path = fn(spec)
            if path is not None:
                written.append(path)
    return written
