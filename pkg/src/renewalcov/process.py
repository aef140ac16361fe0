"""Core renewal-covering process: state, exact geometric sampling, both
constructions, and the long-horizon driver.

The process places "generators" P_1 < P_2 < ... starting from P_1 = 2.
Given the first n generators, the next gap is Geometric(lambda_n) with
survival probability lambda_n = prod_{k<=n} (1 - P_k^{-alpha}).  The state
tracks ln(lambda_n) and the running sum S_n = sum_{k<=n} 1/lambda_k with
compensated accumulators so that 1e6-step paths stay within the 1e-12
relative drift budget enforced by the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, NumericFailure

P_MAX = 2**63 - 1
SITE_MODE_MAX_N = 10_000
DEFAULT_CHECKPOINT_RATIO = 10.0 ** 0.125

# One uniform block per refill of the driver loop; sequential draws from
# numpy's PCG64 are identical whether taken scalar-wise or in blocks.
_CHUNK = 8192


def rng_for_seed(seed: int) -> np.random.Generator:
    """The pinned generator for this artifact: numpy PCG64."""
    return np.random.default_rng(seed)


@dataclass
class GeneratorState:
    """Live simulation state after placing `n` generators.

    `s_sum` is S_n = sum_{k=1..n} 1/lambda_k and `s2_sum` the matching sum
    of 1/lambda_k^2 (needed online by the squared Karamata diagnostic).
    The `*_comp` fields carry the Kahan compensation across steps.
    """

    n: int
    p_current: int
    log_lambda: float
    s_sum: float
    alpha: float = 1.0
    s2_sum: float = 0.0
    log_lambda_comp: float = field(default=0.0, repr=False)
    s_comp: float = field(default=0.0, repr=False)
    s2_comp: float = field(default=0.0, repr=False)
    generators: Optional[list[int]] = field(default=None, repr=False)

    @property
    def lam(self) -> float:
        return math.exp(self.log_lambda)


def _validate_prefix(prefix: Sequence[int]) -> None:
    if len(prefix) == 0:
        raise ConfigError("prefix must be non-empty")
    if prefix[0] != 2:
        raise ConfigError(f"prefix must start at 2, got {prefix[0]}")
    for a, b in zip(prefix, prefix[1:]):
        if b <= a:
            raise ConfigError(f"prefix must be strictly increasing, got {a} then {b}")


def new_state(prefix: Sequence[int], alpha: float = 1.0,
              track_generators: bool = True) -> GeneratorState:
    """State conditioned on the exact initial generator values `prefix`."""
    _validate_prefix(prefix)
    if alpha <= 0:
        raise ConfigError("alpha must be positive")
    ll = 0.0
    c_ll = 0.0
    s = 0.0
    c_s = 0.0
    s2 = 0.0
    c_s2 = 0.0
    for p in prefix:
        y = math.log1p(-float(p) ** -alpha) - c_ll
        t = ll + y
        c_ll = (t - ll) - y
        ll = t
        inv = math.exp(-ll)
        y = inv - c_s
        t = s + y
        c_s = (t - s) - y
        s = t
        y = inv * inv - c_s2
        t = s2 + y
        c_s2 = (t - s2) - y
        s2 = t
    return GeneratorState(
        n=len(prefix), p_current=prefix[-1], log_lambda=ll, s_sum=s,
        alpha=alpha, s2_sum=s2, log_lambda_comp=c_ll, s_comp=c_s,
        s2_comp=c_s2, generators=list(prefix) if track_generators else None,
    )


def sample_geometric(p: float, u: float) -> int:
    """Inverse-CDF geometric sample on {1, 2, ...} with pmf (1-p)^(k-1) p.

    `u` is a uniform variate in [0, 1); u == 1.0 is clamped to the largest
    double below 1 rather than rejected.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"geometric parameter must be in (0, 1], got {p}")
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"uniform variate must be in [0, 1), got {u}")
    if u >= 1.0:
        u = math.nextafter(1.0, 0.0)
    if p == 1.0:
        return 1
    return 1 + int(math.floor(math.log1p(-u) / math.log1p(-p)))


def log_lambda_increment(log_lambda: float, p_new: int, alpha: float) -> float:
    """ln(lambda) after admitting the generator `p_new`."""
    if p_new < 2:
        raise ValueError(f"generator must be >= 2, got {p_new}")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return log_lambda + math.log1p(-float(p_new) ** -alpha)


def recompute_log_lambda(generators: Sequence[int], alpha: float = 1.0) -> float:
    """Drift oracle: exact re-summation of log1p(-P^-alpha) in ascending order."""
    _validate_prefix(generators)
    total = 0.0
    comp = 0.0
    for p in generators:
        y = math.log1p(-float(p) ** -alpha) - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def _admit(state: GeneratorState, p_new: int) -> None:
    """Update lambda, S and S2 for a newly placed generator (in place)."""
    y = math.log1p(-float(p_new) ** -state.alpha) - state.log_lambda_comp
    t = state.log_lambda + y
    state.log_lambda_comp = (t - state.log_lambda) - y
    state.log_lambda = t
    inv = math.exp(-state.log_lambda)
    y = inv - state.s_comp
    t = state.s_sum + y
    state.s_comp = (t - state.s_sum) - y
    state.s_sum = t
    y = inv * inv - state.s2_comp
    t = state.s2_sum + y
    state.s2_comp = (t - state.s2_sum) - y
    state.s2_sum = t
    if state.generators is not None:
        state.generators.append(p_new)


def step_geometric(state: GeneratorState, rng) -> tuple[GeneratorState, int]:
    """One renewal step: gap ~ Geometric(lambda_n), drawn by inverse CDF.

    The state is advanced in place and also returned.
    """
    u = float(rng.random())
    gap = sample_geometric(math.exp(state.log_lambda), u)
    p_new = state.p_current + gap
    if p_new > P_MAX:
        raise NumericFailure(f"generator value overflowed 64 bits at n={state.n}")
    state.p_current = p_new
    state.n += 1
    _admit(state, p_new)
    return state, gap


def step_site(state: GeneratorState, rng) -> tuple[GeneratorState, int, int]:
    """Bernoulli-site scan construction: lazily examine sites above the
    current generator, one Bernoulli(P_j^-alpha) draw per existing generator,
    and stop at the first site every draw misses.

    Cost is O(n) per site; this is the correctness oracle, not a
    production path.
    """
    if state.generators is None:
        raise ConfigError("site mode requires a state tracking its generators")
    gens = state.generators
    alpha = state.alpha
    site = state.p_current
    scanned = 0
    while True:
        site += 1
        scanned += 1
        covered = False
        for g in gens:
            if float(rng.random()) < float(g) ** -alpha:
                covered = True
                break
        if not covered:
            break
    gap = site - state.p_current
    state.p_current = site
    state.n += 1
    _admit(state, site)
    return state, gap, scanned


@dataclass
class RunConfig:
    seed: int
    horizon: int
    horizon_kind: str = "by-index"  # or "by-value"
    mode: str = "geometric"  # or "site"
    alpha: float = 1.0
    checkpoint_ratio: float = DEFAULT_CHECKPOINT_RATIO
    prefix: tuple[int, ...] = (2,)

    def validate(self) -> None:
        if self.horizon_kind not in ("by-index", "by-value"):
            raise ConfigError(f"unknown horizon kind {self.horizon_kind!r}")
        if self.mode not in ("geometric", "site"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.horizon < 1:
            raise ConfigError("horizon must be >= 1")
        if self.alpha <= 0:
            raise ConfigError("alpha must be positive")
        if self.checkpoint_ratio <= 1.0:
            raise ConfigError("checkpoint ratio must be > 1")
        _validate_prefix(self.prefix)
        if self.mode == "site" and self.horizon_kind == "by-index" \
                and self.horizon > SITE_MODE_MAX_N:
            raise ConfigError(
                f"site mode is capped at n <= {SITE_MODE_MAX_N} (O(n) per site)")


@dataclass
class Trace:
    """Checkpointed history of one run, on a geometric grid over n.

    Columns are parallel lists; `gap` holds the single-step gap that landed
    on the row's n (0 for the initial prefix row).  `s2` and the running
    gap-ratio maxima are online accumulations that cannot be reconstructed
    from the sparse grid, so they ride along as auxiliary outputs.
    """

    n: list[int]
    P: list[int]
    gap: list[int]
    lam: list[float]
    log_lambda: list[float]
    S: list[float]
    s2: list[float]
    prefix: tuple[int, ...]
    config_echo: Optional[RunConfig] = None
    max_gap_ratio: float = 0.0        # gap / ln^2(new generator), whole path
    max_gap_ratio_left: float = 0.0   # gap / ln^2(left endpoint), whole path

    def __len__(self) -> int:
        return len(self.n)


def checkpoint_grid(n0: int, ratio: float) -> Iterable[int]:
    """Strictly increasing grid n_j = round(n0 * ratio^j), j >= 1."""
    last = n0
    j = 1
    while True:
        cp = round(n0 * ratio**j)
        j += 1
        if cp > last:
            last = cp
            yield cp


def advance(state: GeneratorState, config: RunConfig, rng,
            sink: Optional[Callable] = None) -> Trace:
    """Drive the process to the configured horizon, emitting checkpoint rows.

    Deterministic given (seed-derived rng, config).  The passed state is
    advanced in place to the final position.
    """
    config.validate()
    if state.n != len(config.prefix) or state.p_current != config.prefix[-1]:
        raise ConfigError("state does not match the config prefix")

    cols_n: list[int] = []
    cols_P: list[int] = []
    cols_gap: list[int] = []
    cols_lam: list[float] = []
    cols_ll: list[float] = []
    cols_S: list[float] = []
    cols_s2: list[float] = []

    def emit(n, P, gap, ll, S, s2):
        lam = math.exp(ll)
        cols_n.append(n)
        cols_P.append(P)
        cols_gap.append(gap)
        cols_lam.append(lam)
        cols_ll.append(ll)
        cols_S.append(S)
        cols_s2.append(s2)
        if sink is not None:
            sink((n, P, gap, lam, ll, S, s2))

    by_index = config.horizon_kind == "by-index"
    horizon = config.horizon
    if by_index and horizon < state.n:
        raise ConfigError("by-index horizon below the prefix length")

    emit(state.n, state.p_current, 0, state.log_lambda, state.s_sum, state.s2_sum)

    grid = checkpoint_grid(state.n, config.checkpoint_ratio)
    next_cp = next(grid)

    max_ratio_right = 0.0
    max_ratio_left = 0.0

    def done() -> bool:
        return state.n >= horizon if by_index else state.p_current >= horizon

    if config.mode == "site":
        while not done():
            if state.n >= SITE_MODE_MAX_N:
                raise ConfigError(
                    f"site mode exceeded the n <= {SITE_MODE_MAX_N} guard rail")
            lp_left = math.log(state.p_current)
            _, gap, _ = step_site(state, rng)
            lp_right = math.log(state.p_current)
            max_ratio_left = max(max_ratio_left, gap / (lp_left * lp_left))
            max_ratio_right = max(max_ratio_right, gap / (lp_right * lp_right))
            if state.n == next_cp or done():
                emit(state.n, state.p_current, gap, state.log_lambda,
                     state.s_sum, state.s2_sum)
                while next_cp <= state.n:
                    next_cp = next(grid)
    else:
        # Hot loop: locals mirror the state and are written back at the end.
        n = state.n
        P = state.p_current
        ll = state.log_lambda
        c_ll = state.log_lambda_comp
        s = state.s_sum
        c_s = state.s_comp
        s2 = state.s2_sum
        c_s2 = state.s2_comp
        alpha = state.alpha
        plain_alpha = alpha == 1.0
        log1p = math.log1p
        exp = math.exp
        floor = math.floor
        log = math.log
        lp = log(P)
        us = rng.random(_CHUNK)
        ui = 0
        while (n < horizon) if by_index else (P < horizon):
            if ui == _CHUNK:
                us = rng.random(_CHUNK)
                ui = 0
            u = us[ui]
            ui += 1
            lam = exp(ll)
            gap = 1 + int(floor(log1p(-u) / log1p(-lam)))
            P += gap
            if P > P_MAX:
                raise NumericFailure(f"generator value overflowed 64 bits at n={n}")
            n += 1
            r = gap / (lp * lp)
            if r > max_ratio_left:
                max_ratio_left = r
            lp = log(P)
            r = gap / (lp * lp)
            if r > max_ratio_right:
                max_ratio_right = r
            if plain_alpha:
                y = log1p(-1.0 / P) - c_ll
            else:
                y = log1p(-float(P) ** -alpha) - c_ll
            t = ll + y
            c_ll = (t - ll) - y
            ll = t
            inv = exp(-ll)
            y = inv - c_s
            t = s + y
            c_s = (t - s) - y
            s = t
            y = inv * inv - c_s2
            t = s2 + y
            c_s2 = (t - s2) - y
            s2 = t
            if n == next_cp or ((n >= horizon) if by_index else (P >= horizon)):
                emit(n, P, gap, ll, s, s2)
                while next_cp <= n:
                    next_cp = next(grid)
        state.n = n
        state.p_current = P
        state.log_lambda = ll
        state.log_lambda_comp = c_ll
        state.s_sum = s
        state.s_comp = c_s
        state.s2_sum = s2
        state.s2_comp = c_s2
        state.generators = None

    return Trace(
        n=cols_n, P=cols_P, gap=cols_gap, lam=cols_lam, log_lambda=cols_ll,
        S=cols_S, s2=cols_s2, prefix=tuple(config.prefix), config_echo=config,
        max_gap_ratio=max_ratio_right, max_gap_ratio_left=max_ratio_left,
    )


def run(config: RunConfig, sink: Optional[Callable] = None) -> Trace:
    """Fresh state + pinned rng + advance, in one call."""
    config.validate()
    state = new_state(config.prefix, config.alpha,
                      track_generators=config.mode == "site")
    rng = rng_for_seed(config.seed)
    return advance(state, config, rng, sink=sink)
