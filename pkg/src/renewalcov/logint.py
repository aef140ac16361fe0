"""Logarithmic-integral machinery.

li(x) is the principal value of the integral of 1/ln t from 0 to x and is
evaluated through the identity li(x) = Ei(ln x).  Ei itself is computed
from its power series for moderate arguments and from the asymptotic /
continued-fraction forms outside that range.  The inverse branch on
(1, inf) solves f'(x) = ln f(x); li_inv grows like x ln x + x ln ln x.

All constants (the Soldner zero, li(2), Ei(1)) are computed here; the
test suite pins them against an independent principal-value quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

EULER_GAMMA = 0.5772156649015328606

_SERIES_MAX = 40.0     # power series used on [-6, 40]
_CF_BELOW = -6.0       # continued fraction for strongly negative arguments
_MAX_TERMS = 500


@dataclass
class PrincipalValueConfig:
    abs_tol: float = 1e-12
    max_refinements: int = 60

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")


DEFAULT_PV = PrincipalValueConfig()


def _ei_series(x: float, tol: float) -> float:
    total = EULER_GAMMA + math.log(abs(x))
    term = 1.0
    for k in range(1, _MAX_TERMS):
        term *= x / k
        inc = term / k
        total += inc
        if abs(inc) < tol * max(1.0, abs(total)):
            break
    return total


def _ei_asymptotic(x: float) -> float:
    # e^x/x * sum k!/x^k, truncated at the smallest term.
    total = 1.0
    term = 1.0
    for k in range(1, _MAX_TERMS):
        nxt = term * k / x
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return math.exp(x) / x * total


def _e1_continued_fraction(t: float, tol: float) -> float:
    # E1(t) = e^-t / (t + 1 - 1/(t + 3 - 4/(t + 5 - 9/(...)))), modified Lentz.
    tiny = 1e-300
    b = t + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for k in range(1, _MAX_TERMS):
        a = -(k * k)
        b = t + 2.0 * k + 1.0
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < tol:
            break
    return math.exp(-t) * h


def ei(x: float, config: PrincipalValueConfig = DEFAULT_PV) -> float:
    """Exponential integral Ei(x), principal value for x > 0."""
    if x == 0.0:
        raise ValueError("Ei has a logarithmic singularity at 0")
    if x >= _SERIES_MAX:
        return _ei_asymptotic(x)
    if x <= _CF_BELOW:
        return -_e1_continued_fraction(-x, config.abs_tol)
    return _ei_series(x, config.abs_tol)


def li(x: float, config: PrincipalValueConfig = DEFAULT_PV) -> float:
    """Principal value of the logarithmic integral, via li(x) = Ei(ln x)."""
    if x <= 0.0:
        raise ValueError(f"li requires x > 0, got {x}")
    if x == 1.0:
        raise ValueError("li diverges at x = 1")
    return ei(math.log(x), config)


def li_inv(y: float, config: PrincipalValueConfig = DEFAULT_PV) -> float:
    """The unique x > 1 with li(x) = y (upper branch; total on the reals).

    Newton in x with derivative 1/ln x, started from the leading
    asymptotic for large y, with a bracketed bisection fallback whenever
    an iterate misbehaves.
    """
    # Initial guess: invert the leading growth for large y, the
    # li(x) ~ gamma + ln ln x behavior near x = 1 for small y.
    min_x = math.nextafter(1.0, 2.0)
    if y > math.e:
        x = y * (math.log(y) + math.log(math.log(y)))
    else:
        t = math.exp(min(y - EULER_GAMMA, 1.0))
        x = max(1.0 + t, min_x)

    lo, hi = _bracket(y, x, config)
    # Residuals below the double-precision noise floor of li at this
    # magnitude are not reachable, so the target scales with |y|.
    tol = max(10.0 * config.abs_tol, 4e-16 * abs(y))
    for _ in range(200):
        fx = li(x, config) - y
        if abs(fx) <= tol:
            return x
        if fx > 0.0:
            hi = min(hi, x)
        else:
            lo = max(lo, x)
        step = fx * math.log(x)
        x_new = x - step
        if not (lo < x_new < hi) or not math.isfinite(x_new):
            x_new = 0.5 * (lo + hi)
        if x_new == x:
            break
        x = x_new
    return x


def _bracket(y: float, x0: float, config: PrincipalValueConfig) -> tuple[float, float]:
    min_x = math.nextafter(1.0, 2.0)
    lo = max(x0, min_x)
    hi = max(x0, min_x)
    for _ in range(2000):
        if li(lo, config) < y or lo == min_x:
            break
        lo = max(1.0 + 0.5 * (lo - 1.0), min_x)
    for _ in range(2000):
        if li(hi, config) > y:
            break
        hi = 1.0 + 2.0 * (hi - 1.0)
    return lo, hi


@lru_cache(maxsize=1)
def soldner() -> float:
    """The Ramanujan-Soldner constant: the unique zero of li in (1, 2)."""
    return li_inv(0.0, PrincipalValueConfig(abs_tol=1e-13))


def ode_family(c: float, x: float, config: PrincipalValueConfig = DEFAULT_PV) -> float:
    """Solution family (1/c) * li_inv(c x) of the ODE f'(x) = ln f(x)."""
    if c <= 0:
        raise ValueError("c must be positive")
    return li_inv(c * x, config) / c


def asymptotic_main(n: float) -> float:
    """Leading growth n ln n + n ln ln n shared by li_inv, the n-th prime,
    and the renewal covering."""
    if n <= math.e:
        raise ValueError(f"need n > e for ln ln n, got {n}")
    return n * math.log(n) + n * math.log(math.log(n))
