"""Empirical-distribution utilities: step-function CDFs, the two-sample
Kolmogorov-Smirnov distance, and the chi-square statistic used by the
construction-equivalence and sampler checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EmpiricalCDF:
    """Right-continuous step function F(x) = #(samples <= x) / N."""

    sorted_samples: np.ndarray

    def __call__(self, x) -> np.ndarray | float:
        n = len(self.sorted_samples)
        out = np.searchsorted(self.sorted_samples, x, side="right") / n
        return float(out) if np.isscalar(x) else out

    def __len__(self) -> int:
        return len(self.sorted_samples)


def empirical_cdf(samples) -> EmpiricalCDF:
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empirical CDF of an empty sample")
    return EmpiricalCDF(np.sort(arr))


def ks_distance(a: EmpiricalCDF, b: EmpiricalCDF) -> float:
    """Sup-norm distance over the merged jump set of the two step functions."""
    grid = np.union1d(a.sorted_samples, b.sorted_samples)
    return float(np.max(np.abs(a(grid) - b(grid))))


def signed_cdf_excess(a: EmpiricalCDF, b: EmpiricalCDF) -> float:
    """max over the merged jump set of (F_a - F_b), floored at zero."""
    grid = np.union1d(a.sorted_samples, b.sorted_samples)
    return float(max(0.0, np.max(a(grid) - b(grid))))


def chi_square(observed, expected_pmf) -> float:
    """Pearson statistic sum (obs - exp)^2 / exp; the pmf is renormalized
    over the provided bins and scaled to the observed total count."""
    obs = np.asarray(observed, dtype=np.float64)
    pmf = np.asarray(expected_pmf, dtype=np.float64)
    if obs.shape != pmf.shape:
        raise ValueError("observed and expected pmf must align")
    if np.any(pmf <= 0):
        raise ValueError("expected pmf must be strictly positive on all bins")
    exp = pmf / pmf.sum() * obs.sum()
    return float(np.sum((obs - exp) ** 2 / exp))
