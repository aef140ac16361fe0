"""Prime-number ground truth: sieve, counting, n-th prime, and the
Dusart-Rosser two-sided bounds on p_n used as a deterministic benchmark
for the simulated generator sequence."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .process import Trace

SIEVE_LIMIT_MAX = 10**9


@dataclass(frozen=True)
class PrimeTable:
    """Immutable Eratosthenes table over [2, limit]."""

    limit: int
    is_prime_odd: np.ndarray   # is_prime_odd[i] <-> 2*i + 1 is prime (index 0 unused)
    prime_list: np.ndarray     # ascending int64 primes <= limit

    def __contains__(self, x: int) -> bool:
        if x < 2 or x > self.limit:
            return False
        if x == 2:
            return True
        return x % 2 == 1 and bool(self.is_prime_odd[x // 2])


def sieve(limit: int) -> PrimeTable:
    """Odd-only sieve of Eratosthenes up to `limit` inclusive."""
    if limit < 2:
        raise ConfigError(f"sieve limit must be >= 2, got {limit}")
    if limit > SIEVE_LIMIT_MAX:
        raise ConfigError(f"sieve limit {limit} over the {SIEVE_LIMIT_MAX} cap")
    size = (limit + 1) // 2  # odd[i] represents 2*i + 1
    odd = np.ones(size, dtype=bool)
    odd[0] = False  # 1 is not prime
    for i in range(1, min(size, (int(math.isqrt(limit)) + 1) // 2 + 1)):
        if odd[i]:
            p = 2 * i + 1
            start = (p * p) // 2
            if start < size:
                odd[start::p] = False
    primes = 2 * np.nonzero(odd)[0] + 1
    prime_list = np.concatenate(([2], primes)).astype(np.int64)
    return PrimeTable(limit=limit, is_prime_odd=odd, prime_list=prime_list)


def nth_prime(table: PrimeTable, n: int) -> int:
    if not 1 <= n <= len(table.prime_list):
        raise ConfigError(f"nth_prime index {n} outside the table "
                          f"(holds {len(table.prime_list)} primes)")
    return int(table.prime_list[n - 1])


def pi(table: PrimeTable, x: int) -> int:
    """Prime counting function pi(x), exact lookup."""
    if x > table.limit:
        raise ConfigError(f"pi({x}) beyond sieve limit {table.limit}")
    return int(np.searchsorted(table.prime_list, x, side="right"))


def dusart_rosser_violations(table: PrimeTable, n_lo: int, n_hi: int) -> list[int]:
    """Indices n in [n_lo, n_hi] where p_n leaves the band
    [n ln n + n ln ln n - n, n ln n + n ln ln n]; expected empty for n >= 7."""
    if not 7 <= n_lo <= n_hi:
        raise ConfigError(f"need 7 <= n_lo <= n_hi, got [{n_lo}, {n_hi}]")
    if n_hi > len(table.prime_list):
        raise ConfigError(f"n_hi {n_hi} beyond table ({len(table.prime_list)} primes)")
    n = np.arange(n_lo, n_hi + 1, dtype=np.float64)
    p = table.prime_list[n_lo - 1:n_hi].astype(np.float64)
    main = n * np.log(n) + n * np.log(np.log(n))
    bad = (p < main - n) | (p > main)
    return [int(v) for v in np.arange(n_lo, n_hi + 1)[bad]]


def compare_to_primes(trace: Trace, table: PrimeTable) -> list[tuple[int, float]]:
    """Exploratory series (n, P_n / p_n) on the trace's checkpoint grid."""
    if trace.n[-1] > len(table.prime_list):
        raise ConfigError(
            f"table holds {len(table.prime_list)} primes, trace reaches n={trace.n[-1]}")
    return [(n, P / table.prime_list[n - 1])
            for n, P in zip(trace.n, trace.P)]
