"""Monte Carlo laboratory for the renewal covering of the natural numbers."""

from .errors import ConditioningUnreachable, ConfigError, NumericFailure
from .process import (GeneratorState, RunConfig, Trace, advance, new_state,
                      recompute_log_lambda, rng_for_seed, run,
                      sample_geometric, step_geometric, step_site,
                      log_lambda_increment)
from .logint import (PrincipalValueConfig, asymptotic_main, ei, li, li_inv,
                     ode_family, soldner)
from .primes import PrimeTable, compare_to_primes, dusart_rosser_violations, nth_prime, pi, sieve
from .stats import EmpiricalCDF, chi_square, empirical_cdf, ks_distance
from .ensemble import (EnsembleConfig, EnsembleResult, conjecture_cdf,
                       mix_stream, run_ensemble, z_statistic)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
