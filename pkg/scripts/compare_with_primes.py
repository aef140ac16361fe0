#!/usr/bin/env python3
"""Side-by-side of the simulated generators and the actual primes.

Prints P_n, p_n, and their ratio on a decade grid, plus the
Dusart-Rosser band check for the true primes.
"""

import argparse
import math

from renewalcov.primes import dusart_rosser_violations, nth_prime, sieve
from renewalcov.process import RunConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--steps", type=int, default=10**5)
    args = ap.parse_args()

    trace = run(RunConfig(seed=args.seed, horizon=args.steps))
    n_max = trace.n[-1]
    limit = int(n_max * (math.log(n_max) + math.log(math.log(n_max)))) + 100
    table = sieve(max(limit, 30))

    print(f"{'n':>8}  {'P_n':>10}  {'p_n':>10}  {'P_n/p_n':>8}")
    for n, P in zip(trace.n, trace.P):
        if n in {10**k for k in range(0, 7)}:
            p = nth_prime(table, n)
            print(f"{n:>8}  {P:>10}  {p:>10}  {P / p:>8.4f}")
    bad = dusart_rosser_violations(table, 7, n_max)
    print(f"dusart-rosser violations for 7 <= n <= {n_max}: {len(bad)}")


if __name__ == "__main__":
    main()
