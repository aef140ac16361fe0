"""Reproducible multi-replica runs.

Replica i draws its RNG stream from mix(master_seed, i), where mix is the
published splitmix64 finalizer, so an ensemble is a pure function of its
config: same result for any worker count, replicas always ordered by
index.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import ConfigError, NumericFailure
from .process import RunConfig, Trace, run
from .stats import EmpiricalCDF, empirical_cdf, ks_distance

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix_stream(master_seed: int, replica_index: int) -> int:
    """splitmix64 output function applied to master_seed + (i+1)*golden."""
    z = (master_seed + (replica_index + 1) * _GOLDEN) & _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


@dataclass
class EnsembleConfig:
    master_seed: int
    replicas: int
    run: RunConfig                      # seed field ignored, template only
    parallelism: Optional[int] = None   # None = automatic

    def validate(self) -> None:
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        self.run.validate()


def z_statistic(P: int, n: int) -> float:
    """Conjectured fluctuation statistic (P - n ln n - n ln ln n) / n."""
    if n < 3:
        raise ValueError(f"z statistic needs n >= 3, got {n}")
    return (P - n * math.log(n) - n * math.log(math.log(n))) / n


@dataclass
class EnsembleResult:
    """Cross-replica arrays on the common checkpoint grid.

    Array shapes are (replicas, len(checkpoints)); `z` is NaN where n < 3
    and `ratio` (P / (n ln n)) is NaN where n < 2.
    """

    checkpoints: list[int]
    P: np.ndarray
    lam: np.ndarray
    S: np.ndarray
    s2: np.ndarray
    ratio: np.ndarray
    z: np.ndarray
    max_gap_ratio: np.ndarray        # per replica, right-endpoint convention
    max_gap_ratio_left: np.ndarray   # per replica, left-endpoint convention
    replica_seeds: list[int]
    config: EnsembleConfig
    traces: Optional[list[Trace]] = None

    def checkpoint_index(self, n: int) -> int:
        try:
            return self.checkpoints.index(n)
        except ValueError:
            raise ConfigError(f"checkpoint n={n} not present in the ensemble") from None


def _run_replica(args) -> Trace:
    config, seed = args
    return run(replace(config, seed=seed))


def run_ensemble(config: EnsembleConfig, keep_traces: bool = False) -> EnsembleResult:
    config.validate()
    seeds = [mix_stream(config.master_seed, i) for i in range(config.replicas)]
    jobs = [(config.run, s) for s in seeds]
    workers = config.parallelism or min(config.replicas, multiprocessing.cpu_count())
    try:
        if workers > 1 and config.replicas > 1:
            with multiprocessing.Pool(workers) as pool:
                traces = pool.map(_run_replica, jobs)
        else:
            traces = [_run_replica(j) for j in jobs]
    except NumericFailure:
        raise
    return assemble(config, seeds, traces, keep_traces)


def assemble(config: EnsembleConfig, seeds: list[int], traces: list[Trace],
             keep_traces: bool) -> EnsembleResult:
    common = set(traces[0].n)
    for tr in traces[1:]:
        common &= set(tr.n)
    checkpoints = sorted(common)
    if not checkpoints:
        raise ConfigError("replicas share no checkpoint")
    R, C = len(traces), len(checkpoints)
    P = np.empty((R, C), dtype=np.int64)
    lam = np.empty((R, C))
    S = np.empty((R, C))
    s2 = np.full((R, C), np.nan)
    for i, tr in enumerate(traces):
        idx = {n: j for j, n in enumerate(tr.n)}
        sel = [idx[n] for n in checkpoints]
        P[i] = [tr.P[j] for j in sel]
        lam[i] = [tr.lam[j] for j in sel]
        S[i] = [tr.S[j] for j in sel]
        if tr.s2:
            s2[i] = [tr.s2[j] for j in sel]
    ns = np.asarray(checkpoints, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ns >= 2, P / (ns * np.log(ns)), np.nan)
        z = np.where(ns >= 3,
                     (P - ns * np.log(ns) - ns * np.log(np.log(np.maximum(ns, 3))))
                     / ns, np.nan)
    return EnsembleResult(
        checkpoints=checkpoints, P=P, lam=lam, S=S, s2=s2, ratio=ratio, z=z,
        max_gap_ratio=np.array([tr.max_gap_ratio for tr in traces]),
        max_gap_ratio_left=np.array([tr.max_gap_ratio_left for tr in traces]),
        replica_seeds=seeds, config=config,
        traces=traces if keep_traces else None,
    )


def conjecture_cdf(result: EnsembleResult, n: int) -> tuple[EmpiricalCDF, dict]:
    """Empirical law of the Z statistic across replicas at checkpoint n,
    plus a distributional-stability heuristic: the KS distance between the
    Z CDFs at the two largest checkpoints (exploratory, no threshold)."""
    j = result.checkpoint_index(n)
    cdf = empirical_cdf(result.z[:, j])
    stability: dict = {"n": n}
    usable = [k for k in result.checkpoints if k >= 3]
    if len(usable) >= 2:
        n1, n2 = usable[-2], usable[-1]
        c1 = empirical_cdf(result.z[:, result.checkpoint_index(n1)])
        c2 = empirical_cdf(result.z[:, result.checkpoint_index(n2)])
        stability.update(n_prev=n1, n_last=n2, ks=ks_distance(c1, c2))
    return cdf, stability


def write_summary_csv(result: EnsembleResult, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "mean_P", "mean_ratio", "var_ratio",
                    "q05", "q50", "q95", "mean_Z", "var_Z"])
        for j, n in enumerate(result.checkpoints):
            ratio = result.ratio[:, j]
            zcol = result.z[:, j]
            w.writerow([
                n,
                repr(float(np.mean(result.P[:, j]))),
                repr(float(np.mean(ratio))),
                repr(float(np.var(ratio, ddof=1)) if len(ratio) > 1 else 0.0),
                repr(float(np.quantile(ratio, 0.05))),
                repr(float(np.quantile(ratio, 0.50))),
                repr(float(np.quantile(ratio, 0.95))),
                repr(float(np.mean(zcol))),
                repr(float(np.var(zcol, ddof=1)) if len(zcol) > 1 else 0.0),
            ])


def write_zcdf_csv(cdf: EmpiricalCDF, path: str) -> None:
    samples = cdf.sorted_samples
    N = len(samples)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["z", "F"])
        for i, zval in enumerate(samples, start=1):
            w.writerow([repr(float(zval)), repr(i / N)])
