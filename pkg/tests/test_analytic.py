import math

import numpy as np
import pytest

from twopol.analytic import (
    bessel_i,
    dop_second_analytic,
    fourth_moment_analytic,
    ntilde_analytic,
    ntilde_quadrature,
)


def bessel_integral(m, x, panels=4096):
    """Reference quadrature (1/pi) int_0^pi cos(m t) exp(x cos t) dt.

    The integrand extends to a smooth periodic function, so the trapezoid
    rule converges spectrally; 4096 panels are far beyond machine precision
    for x <= 20.
    """
    t = np.linspace(0.0, math.pi, panels + 1)
    f = np.cos(m * t) * np.exp(x * np.cos(t))
    h = math.pi / panels
    return h * (0.5 * f[0] + f[1:-1].sum() + 0.5 * f[-1]) / math.pi


def bessel_integral_scaled(m, x, panels=4096):
    """Same integral with the e^-x factor folded into the integrand."""
    t = np.linspace(0.0, math.pi, panels + 1)
    f = np.cos(m * t) * np.exp(x * (np.cos(t) - 1.0))
    h = math.pi / panels
    return h * (0.5 * f[0] + f[1:-1].sum() + 0.5 * f[-1]) / math.pi


class TestBessel:
    def test_values_at_zero(self):
        assert bessel_i(0, 0.0).value == pytest.approx(1.0, abs=1e-16)
        assert bessel_i(1, 0.0).value == pytest.approx(0.0, abs=1e-16)

    def test_series_values_at_one(self):
        # Frozen from the quadrature definition evaluated to machine precision.
        assert bessel_i(0, 1.0).value == pytest.approx(1.2660658777520084, abs=1e-14)
        assert bessel_i(1, 1.0).value == pytest.approx(0.5651591039924851, abs=1e-14)

    @pytest.mark.parametrize("m", [0, 1])
    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 17.5, 20.0])
    def test_series_matches_quadrature_definition(self, m, x):
        assert bessel_i(m, x).value == pytest.approx(bessel_integral(m, x), rel=1e-12)

    @pytest.mark.parametrize("m", [0, 1])
    @pytest.mark.parametrize("x", [20.5, 25.0, 50.0, 100.0, 400.0])
    def test_asymptotic_matches_scaled_quadrature(self, m, x):
        assert bessel_i(m, x).scaled_value == pytest.approx(
            bessel_integral_scaled(m, x), rel=1e-12
        )

    def test_scaled_value_at_hundred(self):
        # Frozen from the scaled quadrature; close to (2 pi x)^-1/2.
        eval_ = bessel_i(0, 100.0)
        assert eval_.scaled_value == pytest.approx(0.039944379299096683, abs=1e-14)
        assert not eval_.saturated

    def test_branches_agree_at_the_switch_point(self):
        # Both routes must carry full precision where the implementation
        # hands over from the series to the asymptotic expansion.
        from twopol.analytic import _asymptotic_scaled

        for m in (0, 1):
            series_scaled = bessel_i(m, 20.0).scaled_value
            assert series_scaled == pytest.approx(_asymptotic_scaled(m, 20.0), rel=1e-13)

    def test_overflow_saturation(self):
        eval_ = bessel_i(0, 800.0)
        assert eval_.saturated
        assert math.isinf(eval_.value)
        assert 0.0 < eval_.scaled_value < 1.0

    def test_negative_argument_rejected(self):
        with pytest.raises(ValueError):
            bessel_i(0, -1.0)
        with pytest.raises(ValueError):
            bessel_i(2, 1.0)

    def test_monotone_increasing(self):
        grid = 0.1 * np.arange(1, 101)
        for m in (0, 1):
            values = [bessel_i(m, x).value for x in grid]
            assert all(b > a for a, b in zip(values, values[1:]))

    def test_order_zero_dominates_order_one(self):
        for x in 0.1 * np.arange(1, 101):
            assert bessel_i(0, x).value - bessel_i(1, x).value > 0.0

    def test_scaled_value_ranges(self):
        for x in (0.0, 0.5, 3.0, 30.0, 300.0):
            assert 0.0 < bessel_i(0, x).scaled_value <= 1.0
            assert 0.0 <= bessel_i(1, x).scaled_value < 1.0


class TestConditionedIntensityForms:
    def test_pole_value(self):
        for n0 in (0.5, 1.0, 4.0):
            assert ntilde_analytic(n0, 0.0) == pytest.approx(n0 * math.exp(-n0), rel=1e-14)

    def test_equator_value_at_unit_intensity(self):
        # e^-1 (I0(1) + I1(1)), frozen from the series.
        assert ntilde_analytic(1.0, math.pi / 2) == pytest.approx(
            0.6736700229433489, abs=1e-14
        )

    def test_zero_intensity(self):
        assert ntilde_analytic(0.0, 1.2) == 0.0
        assert ntilde_quadrature(0.0, 1.2) == 0.0

    @pytest.mark.parametrize("n0", [0.5, 1.0, 2.0, 4.0])
    @pytest.mark.parametrize("chi", [0.0, math.pi / 6, math.pi / 3, math.pi / 2])
    def test_quadrature_matches_closed_form(self, n0, chi):
        assert ntilde_quadrature(n0, chi, delta=0.7, panels=512) == pytest.approx(
            ntilde_analytic(n0, chi), abs=1e-10
        )

    def test_quadrature_is_azimuth_invariant(self):
        a = ntilde_quadrature(2.0, 1.0, delta=0.0, panels=512)
        b = ntilde_quadrature(2.0, 1.0, delta=1.3, panels=512)
        assert a == pytest.approx(b, abs=1e-12)

    def test_quadrature_needs_enough_panels(self):
        with pytest.raises(ValueError, match="panels"):
            ntilde_quadrature(1.0, 1.0, panels=32)

    def test_extremal_angles(self):
        chis = np.linspace(0.0, math.pi, 41)
        for n0 in (0.5, 1.0, 3.0):
            values = [ntilde_analytic(n0, chi) for chi in chis]
            assert int(np.argmax(values)) == 20  # chi = pi/2
            assert values[0] == pytest.approx(min(values), rel=1e-14)
            assert values[-1] == pytest.approx(min(values), rel=1e-14)

    def test_huge_intensity_stays_finite(self):
        value = ntilde_analytic(1e6, math.pi / 2)
        assert math.isfinite(value)
        assert value > 0.0


class TestAnalyticDop:
    def test_vanishes_for_weak_light(self):
        assert dop_second_analytic(0.0) == 0.0
        assert dop_second_analytic(0.01) < 0.01

    def test_unit_intensity_value(self):
        assert dop_second_analytic(1.0) == pytest.approx(0.2935919918424582, abs=1e-14)

    def test_approaches_one_for_intense_light(self):
        # Beyond n0 ~ 50 the sub-unit gap (~e^-n0) drops below double
        # resolution, so the computed value saturates at exactly 1.
        assert dop_second_analytic(100.0) > 0.95
        assert dop_second_analytic(1e4) > 0.995
        assert dop_second_analytic(1e6) <= 1.0

    def test_monotone_in_intensity(self):
        grid = np.concatenate([0.1 * np.arange(1, 101), [15.0, 20.0, 30.0]])
        values = [dop_second_analytic(n0) for n0 in grid]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(0.0 <= v < 1.0 for v in values)


class TestFourthMoment:
    def test_aligned_direction(self):
        assert fourth_moment_analytic(2.0, 0.0) == pytest.approx(4.0, abs=1e-14)

    def test_diagonal_direction(self):
        assert fourth_moment_analytic(1.0, math.pi / 4) == pytest.approx(1.5, abs=1e-14)

    def test_negative_intensity_rejected(self):
        with pytest.raises(ValueError):
            fourth_moment_analytic(-1.0, 0.0)
