import math

import numpy as np
import pytest
from scipy.integrate import quad

from renewalcov.logint import (PrincipalValueConfig, asymptotic_main, ei, li,
                               li_inv, ode_family, soldner)


def li_pv_oracle(x: float) -> float:
    """Independent oracle: principal value of the defining integral via
    symmetric excision around t = 1 with Richardson extrapolation."""

    def excised(eps: float) -> float:
        left, _ = quad(lambda t: 1.0 / math.log(t), 0.0, 1.0 - eps, limit=300)
        lo = min(1.0 + eps, x)
        right, _ = quad(lambda t: 1.0 / math.log(t), lo, x, limit=300) \
            if x > 1.0 + eps else 0.0
        return left + right

    if x < 1.0:
        val, _ = quad(lambda t: 1.0 / math.log(t), 0.0, x, limit=300)
        return val
    levels = [excised(1e-3 / 2**k) for k in range(8)]
    # Excision error is a power series in eps; eliminate terms order by
    # order with ratio-2 Richardson.
    for order in range(1, 8):
        levels = [(2**order * levels[i + 1] - levels[i]) / (2**order - 1)
                  for i in range(len(levels) - 1)]
    return levels[0]


def ei_pv_oracle(x: float) -> float:
    # Ei(x) = li(e^x)
    return li_pv_oracle(math.exp(x))


class TestEi:
    def test_ei_one_against_quadrature(self):
        assert ei(1.0) == pytest.approx(ei_pv_oracle(1.0), abs=1e-9)
        assert ei(1.0) == pytest.approx(1.89511781, abs=1e-8)

    def test_identity_with_li(self):
        assert ei(math.log(2.0)) == li(2.0)

    def test_sign_change_at_real_root(self):
        # Bisection oracle for the root of Ei.
        lo, hi = 0.3, 0.5
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if ei(mid) < 0:
                lo = mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        assert root == pytest.approx(0.372507, abs=1e-6)
        assert ei(0.9 * root) < 0 < ei(1.1 * root)
        # The root of Ei is ln of the root of li.
        assert root == pytest.approx(math.log(soldner()), abs=1e-10)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            ei(0.0)

    def test_large_argument_regime(self):
        # Both sides of the series/asymptotic switch at 40 against mpmath.
        import mpmath
        assert ei(39.5) == pytest.approx(float(mpmath.ei(39.5)), rel=1e-12)
        assert ei(40.5) == pytest.approx(float(mpmath.ei(40.5)), rel=1e-12)

    def test_negative_regimes(self):
        # Both sides of the series/continued-fraction switch at -6.
        import mpmath
        assert ei(-5.5) == pytest.approx(float(mpmath.ei(-5.5)), rel=1e-9)
        assert ei(-6.5) == pytest.approx(float(mpmath.ei(-6.5)), rel=1e-9)
        assert ei(-30.0) == pytest.approx(float(mpmath.ei(-30)), rel=1e-9)


class TestLi:
    def test_li2_against_quadrature(self):
        assert li(2.0) == pytest.approx(li_pv_oracle(2.0), abs=1e-9)
        assert li(2.0) == pytest.approx(1.04516378, abs=1e-8)

    def test_li_e_equals_ei_one(self):
        assert li(math.e) == pytest.approx(ei(1.0), rel=1e-14)

    @pytest.mark.parametrize("x", [1.5, 2.0, math.e, 10.0, 100.0])
    def test_quadrature_agreement(self, x):
        assert li(x) == pytest.approx(li_pv_oracle(x), abs=1e-9)

    def test_zero_at_soldner(self):
        assert abs(li(soldner())) <= 1e-10

    @pytest.mark.parametrize("x", [0.0, -1.0, 1.0])
    def test_rejects_bad_arguments(self, x):
        with pytest.raises(ValueError):
            li(x)

    def test_strictly_increasing(self):
        xs = np.geomspace(1.01, 1e9, 200)
        vals = [li(x) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestLiInv:
    def test_roundtrip_through_ten(self):
        assert li_inv(li(10.0)) == pytest.approx(10.0, rel=1e-9)

    def test_inverse_at_zero_is_soldner(self):
        # Bisection oracle on li over [1.2, 1.8].
        lo, hi = 1.2, 1.8
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if li(mid) < 0:
                lo = mid
            else:
                hi = mid
        mu = 0.5 * (lo + hi)
        assert li_inv(0.0) == pytest.approx(mu, abs=1e-9)
        assert mu == pytest.approx(1.45136923, abs=1e-8)

    @pytest.mark.parametrize("y", [-1.0, 0.0, 1.0, 10.0, 1e3, 1e6])
    def test_roundtrip_grid(self, y):
        x = li_inv(y)
        assert abs(li(x) - y) <= 1e-9 * max(1.0, abs(y))

    def test_strictly_increasing(self):
        ys = np.linspace(-5, 1e7, 150)
        vals = [li_inv(float(y)) for y in ys]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_leading_asymptotic(self):
        # At y = 1e6 the two-term asymptotic still overshoots by ~6%; the
        # sharper band [0.90, 1.0] is what evaluating both sides gives.
        y = 1e6
        approx = y * (math.log(y) + math.log(math.log(y)))
        assert 0.90 <= li_inv(y) / approx <= 1.0

    def test_ode_residual_along_branch(self):
        h = 1e-3
        for x in np.geomspace(10, 1e6, 25):
            deriv = (li_inv(x + h) - li_inv(x - h)) / (2 * h)
            lnf = math.log(li_inv(x))
            assert abs(deriv - lnf) <= 1e-5 * lnf


class TestOdeFamily:
    def test_c_one_is_li_inv(self):
        assert ode_family(1.0, 50.0) == li_inv(50.0)

    def test_scaling(self):
        assert ode_family(2.0, 33.0) == pytest.approx(0.5 * li_inv(66.0),
                                                      rel=1e-14)

    def test_satisfies_ode(self):
        h = 1e-3
        x = 100.0
        deriv = (ode_family(1.0, x + h) - ode_family(1.0, x - h)) / (2 * h)
        assert deriv == pytest.approx(math.log(ode_family(1.0, x)), rel=1e-6)

    def test_rejects_nonpositive_c(self):
        with pytest.raises(ValueError):
            ode_family(0.0, 1.0)


class TestAsymptoticMain:
    def test_value_at_1e6(self):
        assert asymptotic_main(1e6) == pytest.approx(1.6441303e7, rel=1e-7)

    def test_closed_form_at_e_to_e(self):
        n = math.exp(math.e)
        assert asymptotic_main(n) == pytest.approx(n * (math.e + 1), rel=1e-12)

    def test_ratio_to_li_inv_approaches_one(self):
        ratios = [asymptotic_main(n) / li_inv(n)
                  for n in (1e3, 1e4, 1e5, 1e6)]
        diffs = [abs(1 - r) for r in ratios]
        assert all(b < a for a, b in zip(diffs, diffs[1:]))

    def test_rejects_small_argument(self):
        with pytest.raises(ValueError):
            asymptotic_main(math.e)


def test_pv_config_validates():
    with pytest.raises(ValueError):
        PrincipalValueConfig(abs_tol=0.0)
