"""Trace CSV serialization.

The on-disk interface is the fixed header `n,P,gap,lambda,log_lambda,S`
with integers in decimal and reals in shortest round-trip form.  Online
accumulations that a sparse checkpoint grid cannot reproduce (sum of
1/lambda^2, running gap-ratio maxima) travel in a JSON sidecar next to
the CSV.
"""

from __future__ import annotations

import csv
import json
import math
import os

from .errors import ConfigError
from .process import RunConfig, Trace

TRACE_HEADER = ["n", "P", "gap", "lambda", "log_lambda", "S"]


def aux_path(path: str) -> str:
    return path + ".aux.json"


def write_trace_csv(trace: Trace, path: str, with_aux: bool = True) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_HEADER)
        for i in range(len(trace)):
            w.writerow([trace.n[i], trace.P[i], trace.gap[i],
                        repr(trace.lam[i]), repr(trace.log_lambda[i]),
                        repr(trace.S[i])])
    if with_aux:
        cfg = trace.config_echo
        payload = {
            "prefix": list(trace.prefix),
            "s2": trace.s2,
            "max_gap_ratio": trace.max_gap_ratio,
            "max_gap_ratio_left": trace.max_gap_ratio_left,
            "config": None if cfg is None else {
                "seed": cfg.seed, "horizon": cfg.horizon,
                "horizon_kind": cfg.horizon_kind, "mode": cfg.mode,
                "alpha": cfg.alpha, "checkpoint_ratio": cfg.checkpoint_ratio,
                "prefix": list(cfg.prefix),
            },
        }
        with open(aux_path(path), "w") as fh:
            json.dump(payload, fh)
            fh.write("\n")


def read_trace_csv(path: str) -> Trace:
    """Parse a trace CSV (plus sidecar if present); malformed rows raise
    ConfigError naming the offending row number."""
    cols_n: list[int] = []
    cols_P: list[int] = []
    cols_gap: list[int] = []
    cols_lam: list[float] = []
    cols_ll: list[float] = []
    cols_S: list[float] = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ConfigError(f"trace file {path}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != TRACE_HEADER:
            raise ConfigError(f"{path}: bad trace header {header!r}")
        for rownum, row in enumerate(reader, start=2):
            if len(row) != 6:
                raise ConfigError(f"{path}: row {rownum}: expected 6 fields")
            try:
                n = int(row[0])
                P = int(row[1])
                gap = int(row[2])
                lam = float(row[3])
                ll = float(row[4])
                S = float(row[5])
            except ValueError as exc:
                raise ConfigError(f"{path}: row {rownum}: {exc}") from None
            if cols_n and (n <= cols_n[-1] or P <= cols_P[-1]):
                raise ConfigError(
                    f"{path}: row {rownum}: rows must strictly increase in n and P")
            if not math.isclose(lam, math.exp(ll), rel_tol=1e-12):
                raise ConfigError(
                    f"{path}: row {rownum}: lambda does not match exp(log_lambda)")
            cols_n.append(n)
            cols_P.append(P)
            cols_gap.append(gap)
            cols_lam.append(lam)
            cols_ll.append(ll)
            cols_S.append(S)
    if not cols_n:
        raise ConfigError(f"{path}: empty trace")

    s2 = []
    prefix: tuple[int, ...] = (2,)
    max_ratio = 0.0
    max_ratio_left = 0.0
    config = None
    apath = aux_path(path)
    if os.path.exists(apath):
        with open(apath) as fh:
            aux = json.load(fh)
        s2 = list(aux.get("s2", []))
        prefix = tuple(aux.get("prefix", [2]))
        max_ratio = float(aux.get("max_gap_ratio", 0.0))
        max_ratio_left = float(aux.get("max_gap_ratio_left", 0.0))
        raw = aux.get("config")
        if raw is not None:
            config = RunConfig(
                seed=raw["seed"], horizon=raw["horizon"],
                horizon_kind=raw["horizon_kind"], mode=raw["mode"],
                alpha=raw["alpha"], checkpoint_ratio=raw["checkpoint_ratio"],
                prefix=tuple(raw["prefix"]),
            )
    return Trace(n=cols_n, P=cols_P, gap=cols_gap, lam=cols_lam,
                 log_lambda=cols_ll, S=cols_S, s2=s2, prefix=prefix,
                 config_echo=config, max_gap_ratio=max_ratio,
                 max_gap_ratio_left=max_ratio_left)
