import numpy as np
import pytest

from renewalcov.errors import ConfigError
from renewalcov.primes import (PrimeTable, compare_to_primes,
                               dusart_rosser_violations, nth_prime, pi, sieve)

from conftest import make_trace


@pytest.fixture(scope="module")
def table_10k():
    return sieve(10_000)


class TestSieve:
    def test_small_primes(self, table_10k):
        assert list(table_10k.prime_list[:10]) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_counts(self, table_10k):
        # pi(10^4) = 1229 (classical table value).
        assert len(table_10k.prime_list) == 1229

    def test_membership(self, table_10k):
        assert 2 in table_10k
        assert 7919 in table_10k
        assert 1 not in table_10k
        assert 9999 not in table_10k
        assert 10_001 not in table_10k  # beyond limit

    def test_matches_trial_division(self):
        table = sieve(500)
        def is_prime(m):
            return m >= 2 and all(m % d for d in range(2, int(m**0.5) + 1))
        expect = [m for m in range(2, 501) if is_prime(m)]
        assert list(table.prime_list) == expect

    def test_limit_validation(self):
        with pytest.raises(ConfigError):
            sieve(1)
        with pytest.raises(ConfigError):
            sieve(10**9 + 1)

    def test_limit_two(self):
        assert list(sieve(2).prime_list) == [2]


class TestNthPrime:
    def test_known_values(self, table_10k):
        assert nth_prime(table_10k, 1) == 2
        assert nth_prime(table_10k, 25) == 97
        assert nth_prime(table_10k, 1000) == 7919

    def test_out_of_range(self, table_10k):
        with pytest.raises(ConfigError):
            nth_prime(table_10k, 0)
        with pytest.raises(ConfigError):
            nth_prime(table_10k, 1230)


class TestPi:
    def test_known_values(self, table_10k):
        assert pi(table_10k, 100) == 25
        assert pi(table_10k, 10_000) == 1229
        assert pi(table_10k, 2) == 1
        assert pi(table_10k, 1) == 0

    def test_beyond_limit(self, table_10k):
        with pytest.raises(ConfigError):
            pi(table_10k, 10_001)


class TestDusartRosser:
    def test_no_violations_in_range(self, table_10k):
        assert dusart_rosser_violations(table_10k, 7, 1229) == []

    def test_detects_planted_violation(self, table_10k):
        primes = table_10k.prime_list.copy()
        primes[99] = 10 * primes[99]  # corrupt p_100
        bad = PrimeTable(limit=table_10k.limit,
                         is_prime_odd=table_10k.is_prime_odd,
                         prime_list=primes)
        assert dusart_rosser_violations(bad, 7, 1229) == [100]

    def test_range_validation(self, table_10k):
        with pytest.raises(ConfigError):
            dusart_rosser_violations(table_10k, 6, 100)
        with pytest.raises(ConfigError):
            dusart_rosser_violations(table_10k, 7, 1230)


class TestCompareToPrimes:
    def test_exact_prime_trace(self, table_10k):
        # A trace that walks the primes themselves gives ratio 1 everywhere.
        ns = [1, 2, 5, 25]
        Ps = [nth_prime(table_10k, n) for n in ns]
        trace = make_trace(ns, Ps, [1.0] * len(ns))
        assert compare_to_primes(trace, table_10k) == [(n, 1.0) for n in ns]

    def test_table_too_short(self, table_10k):
        trace = make_trace([1, 2000], [2, 17389], [1.0, 1.0])
        with pytest.raises(ConfigError):
            compare_to_primes(trace, table_10k)
