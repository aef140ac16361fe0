"""Per-lemma diagnostics computed from traces and small dedicated
experiments: slow-variation ratios, Karamata ratios, the concentration
statistic, gap ratios, upcrossing counts, the stochastic-domination
experiment, and the truncated-geometric formulas."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConditioningUnreachable, ConfigError
from .process import Trace, new_state, sample_geometric, step_geometric
from .stats import EmpiricalCDF, empirical_cdf, signed_cdf_excess


@dataclass
class DominationResult:
    cdf_process: EmpiricalCDF
    cdf_iid: EmpiricalCDF
    max_violation: float
    sample_sizes: tuple[int, int]


@dataclass
class DiagnosticsReport:
    """One series per lemma-level diagnostic, all on the trace's
    checkpoint grid.  Serialized as JSON with fixed field names."""

    sv_ratios: list[tuple[float, float]] = field(default_factory=list)
    karamata: list[tuple[int, float]] = field(default_factory=list)
    karamata_sq: list[tuple[int, float]] = field(default_factory=list)
    concentration: list[tuple[int, float, float, float]] = field(default_factory=list)
    gaps: list[tuple[int, float]] = field(default_factory=list)
    max_gap_ratio: float = 0.0
    upcrossings: dict = field(default_factory=dict)
    poly_decay: list[tuple[int, float]] = field(default_factory=list)
    domination: Optional[dict] = None

    def to_json(self) -> str:
        payload = {
            "sv_ratios": [list(r) for r in self.sv_ratios],
            "karamata": [list(r) for r in self.karamata],
            "karamata_sq": [list(r) for r in self.karamata_sq],
            "concentration": [list(r) for r in self.concentration],
            "gaps": [list(r) for r in self.gaps],
            "max_gap_ratio": self.max_gap_ratio,
            "upcrossings": self.upcrossings,
            "poly_decay": [list(r) for r in self.poly_decay],
            "domination": self.domination,
        }
        return json.dumps(payload, indent=2)


def sv_ratio(trace: Trace, t: float) -> list[tuple[float, float]]:
    """Slow-variation series (x, lambda(near x*t) / lambda(x)).

    lambda is step-wise, so pairs are formed by nearest-checkpoint
    matching (no interpolation); x values whose target t*x falls more
    than half a grid step (in log space) from every checkpoint are
    dropped.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    ns = np.asarray(trace.n, dtype=np.float64)
    lams = np.asarray(trace.lam)
    if len(ns) < 2:
        return [(float(x), 1.0) for x in ns] if t == 1.0 else []
    log_ns = np.log(ns)
    # Half the typical grid spacing bounds an acceptable pairing error.
    half_step = 0.5 * np.median(np.diff(log_ns))
    out = []
    for i, x in enumerate(ns):
        target = math.log(t) + log_ns[i]
        j = int(np.argmin(np.abs(log_ns - target)))
        if abs(log_ns[j] - target) <= half_step + 1e-12:
            out.append((float(x), float(lams[j] / lams[i])))
    return out


def karamata_ratio(trace: Trace) -> list[tuple[int, float]]:
    """(n, S_n * lambda_n / n): tends to 1 for monotone slowly varying lambda."""
    return [(n, S * lam / n)
            for n, lam, S in zip(trace.n, trace.lam, trace.S)]


def karamata_sq_ratio(trace: Trace) -> list[tuple[int, float]]:
    """Squared variant (n, sum 1/lambda_k^2 * lambda_n^2 / n); needs the
    online s2 accumulation carried by the trace."""
    if not trace.s2:
        raise ConfigError("trace carries no online sum of 1/lambda^2")
    return [(n, s2 * lam * lam / n)
            for n, lam, s2 in zip(trace.n, trace.lam, trace.s2)]


def poly_decay(trace: Trace, alpha_exp: float) -> list[tuple[int, float]]:
    """(n, n^-alpha / lambda_n): eventually decreasing for the process,
    since lambda shrinks slower than any polynomial."""
    if alpha_exp <= 0:
        raise ValueError("alpha_exp must be positive")
    return [(n, n ** (-alpha_exp) / lam)
            for n, lam in zip(trace.n, trace.lam)]


def concentration(trace: Trace, alpha_exp: float) -> list[tuple[int, float, float, float]]:
    """Per checkpoint (n, raw, envelope, normalized D_n) where
    raw = |P_n - 2 - sum_{k<n} 1/lambda_k|, envelope = n^(alpha/2), and
    D_n = raw * lambda_n / sqrt(n) (the CLT scale, Var ~ n / lambda_n^2)."""
    if not 1.0 < alpha_exp < 2.0:
        raise ValueError("alpha_exp must lie in (1, 2)")
    out = []
    for n, P, lam, S in zip(trace.n, trace.P, trace.lam, trace.S):
        raw = abs(P - 2.0 - (S - 1.0 / lam))
        envelope = n ** (alpha_exp / 2.0)
        d_n = raw * lam / math.sqrt(n)
        out.append((n, raw, envelope, d_n))
    return out


def gap_ratio(trace: Trace) -> tuple[list[tuple[int, float]], float]:
    """Checkpoint series (n, gap_n / ln^2 of the gap's left endpoint) and
    the running whole-path maximum accumulated during simulation (prefix
    rows with no gap are skipped)."""
    series = []
    for n, P, gap in zip(trace.n, trace.P, trace.gap):
        if gap <= 0:
            continue
        left = P - gap
        series.append((n, gap / math.log(left) ** 2))
    return series, trace.max_gap_ratio


def upcrossings(trace: Trace, a: float, n_min: int) -> int:
    """Completed upcrossings of P_n/(n ln n) from below (1+a) to above
    (1+2a) over checkpoints n >= n_min."""
    if a <= 0:
        raise ValueError("a must be positive")
    if n_min < 3:
        raise ValueError("n_min must be >= 3")
    low, high = 1.0 + a, 1.0 + 2.0 * a
    armed = False
    count = 0
    for n, P in zip(trace.n, trace.P):
        if n < n_min:
            continue
        r = P / (n * math.log(n))
        if r <= low:
            armed = True
        elif r > high and armed:
            count += 1
            armed = False
    return count


def linear_growth_margin(trace: Trace, C: float) -> Optional[int]:
    """Smallest checkpoint n0 with P_n > C*n for every checkpoint n >= n0;
    None when the final checkpoint still violates."""
    if C <= 0:
        raise ValueError("C must be positive")
    first: Optional[int] = None
    for n, P in zip(trace.n, trace.P):
        if P > C * n:
            if first is None:
                first = n
        else:
            first = None
    return first


def domination_experiment(prefix_len: int, p: float, horizon: int, replicas: int,
                          rng, max_attempts: int = 10**6) -> DominationResult:
    """Empirical check of the conditional stochastic domination: paths
    conditioned (by rejection) on lambda_m <= p accumulate `horizon` gaps;
    their sum should dominate a sum of iid Geometric(p).

    max_violation is the largest amount by which the iid survival
    function exceeds the process survival function (0 when domination
    holds exactly)."""
    if not 0.0 < p <= 1.0:
        raise ConfigError(f"p must be in (0, 1], got {p}")
    if prefix_len < 1 or horizon < 1 or replicas < 1:
        raise ConfigError("prefix_len, horizon and replicas must be >= 1")
    attempts = 0
    process_sums = np.empty(replicas, dtype=np.float64)
    for r in range(replicas):
        while True:
            attempts += 1
            if attempts > max_attempts:
                raise ConditioningUnreachable(
                    f"event lambda_{prefix_len} <= {p} not hit in {max_attempts} attempts")
            state = new_state((2,), track_generators=False)
            for _ in range(prefix_len - 1):
                step_geometric(state, rng)
            if math.exp(state.log_lambda) <= p:
                break
        total = 0
        for _ in range(horizon):
            _, gap = step_geometric(state, rng)
            total += gap
        process_sums[r] = total
    iid_sums = np.empty(replicas, dtype=np.float64)
    for r in range(replicas):
        total = 0
        for _ in range(horizon):
            total += sample_geometric(p, float(rng.random()))
        iid_sums[r] = total
    cdf_process = empirical_cdf(process_sums)
    cdf_iid = empirical_cdf(iid_sums)
    # survival_iid - survival_process == F_process - F_iid
    violation = signed_cdf_excess(cdf_process, cdf_iid)
    return DominationResult(cdf_process=cdf_process, cdf_iid=cdf_iid,
                            max_violation=violation,
                            sample_sizes=(replicas, replicas))


def truncation_mismatch(p: float, k: int, beta: float) -> tuple[float, float]:
    """Probability that the ln-truncated geometric differs from the plain
    one: exact (1-p)^(beta ln(k)/p) versus the k^-beta bound."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if k < 2:
        raise ValueError("k must be >= 2")
    if beta <= 1.0:
        raise ValueError("beta must exceed 1")
    exponent = beta * math.log(k) / p
    exact = math.exp(exponent * math.log1p(-p))
    bound = float(k) ** -beta
    return exact, bound


def truncated_mean_deficit(p: float, threshold: float) -> float:
    """E[G] - E[G 1{G <= T}] for G ~ Geometric(p) on {1, 2, ...} with
    integer truncation level floor(T): equals (1-p)^floor(T) (1/p + floor(T))."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if threshold < 1.0:
        raise ValueError("threshold must be >= 1")
    m = math.floor(threshold)
    return math.exp(m * math.log1p(-p)) * (1.0 / p + m)


def build_report(trace: Trace, alpha_exp: float = 1.2, layer_a: float = 0.5,
                 sv_t: float = 2.0, n_min: int = 1000,
                 growth_constants: tuple[float, ...] = (1.0, 2.0, 4.0),
                 domination: Optional[DominationResult] = None) -> DiagnosticsReport:
    """All trace-level series in one report (drives the diagnose CLI)."""
    gaps, max_ratio = gap_ratio(trace)
    n_min_eff = max(3, min(n_min, trace.n[-1]))
    report = DiagnosticsReport(
        sv_ratios=sv_ratio(trace, sv_t),
        karamata=karamata_ratio(trace),
        karamata_sq=karamata_sq_ratio(trace) if trace.s2 else [],
        concentration=concentration(trace, alpha_exp),
        gaps=gaps,
        max_gap_ratio=max_ratio,
        upcrossings={"a": layer_a, "n_min": n_min_eff,
                     "count": upcrossings(trace, layer_a, n_min_eff)},
        poly_decay=poly_decay(trace, 0.5),
    )
    if domination is not None:
        report.domination = {
            "max_violation": domination.max_violation,
            "sample_sizes": list(domination.sample_sizes),
        }
    return report
