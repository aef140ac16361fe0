"""Compensated (Kahan) summation for long-running accumulators.

The simulation adds up to 1e8 terms spanning many orders of magnitude;
plain float addition would drift past the 1e-12 relative tolerance the
drift oracle enforces.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class KahanSum:
    """Running compensated sum: `value` is the best estimate, `comp` the carry."""

    value: float = 0.0
    comp: float = 0.0

    def add(self, x: float) -> None:
        y = x - self.comp
        t = self.value + y
        self.comp = (t - self.value) - y
        self.value = t

    def copy(self) -> "KahanSum":
        return KahanSum(self.value, self.comp)


def kahan_total(terms) -> float:
    acc = KahanSum()
    for t in terms:
        acc.add(t)
    return acc.value
