"""Closed-form intensity and polarization results for phase-averaged light.

Everything here is an independent oracle for the Fock-space numerics: the
vacuum-conditioned intensity of amplitude-stabilized phase-randomized light
has the closed form

    ntilde(n0, chi) = n0 e^{-n0} [I0(n0 sin chi) + sin chi I1(n0 sin chi)],

maximized at chi = pi/2 and minimized at chi in {0, pi}, which gives the
degree of polarization (I(n0) - 1)/(I(n0) + 1) with I = I0 + I1.  The
modified Bessel functions I0, I1 are computed in-house: power series up to
the switch point, exponentially scaled asymptotic expansion beyond it, with
the scaled form e^{-x} I_m(x) as the primary representation so products like
n0 e^{-n0} I(n0 sin chi) stay finite for n0 up to 1e6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SERIES_ASYMPTOTIC_SWITCH = 20.0
_EXP_ARG_MAX = 709.0  # exp overflows just above this


@dataclass(frozen=True)
class BesselEval:
    """One evaluation of I_m: plain and exponentially scaled values.

    ``saturated`` marks arguments where e^x overflows the double range; the
    plain value is then +inf and only ``scaled_value`` is meaningful.
    """

    order: int
    argument: float
    value: float
    scaled_value: float
    saturated: bool = False


def _series_unscaled(m: int, x: float) -> float:
    # Sum_k (x/2)^(2k+m) / (k! (k+m)!); all terms positive, no cancellation.
    half_sq = (x / 2.0) ** 2
    term = (x / 2.0) ** m / math.factorial(m)
    total = term
    k = 0
    while True:
        k += 1
        term *= half_sq / (k * (k + m))
        total += term
        if term < total * 1e-17 or k > 200:
            return total


def _asymptotic_scaled(m: int, x: float) -> float:
    # e^{-x} I_m(x) ~ (2 pi x)^{-1/2} sum_k t_k with
    # t_k = t_{k-1} ((2k-1)^2 - 4m^2) / (8 k x); divergent tail truncated
    # at the smallest term.
    total = 1.0
    term = 1.0
    previous = math.inf
    for k in range(1, 60):
        term *= ((2 * k - 1) ** 2 - 4 * m * m) / (8.0 * k * x)
        if abs(term) >= previous:
            break
        total += term
        previous = abs(term)
        if abs(term) < 1e-18 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i(m: int, x: float) -> BesselEval:
    """Modified Bessel function I_m for m in {0, 1} and x >= 0."""
    if m not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {m!r}")
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"argument must be finite and nonnegative, got {x!r}")
    if x <= SERIES_ASYMPTOTIC_SWITCH:
        value = _series_unscaled(m, x)
        return BesselEval(m, x, value, math.exp(-x) * value)
    scaled = _asymptotic_scaled(m, x)
    if x > _EXP_ARG_MAX:
        return BesselEval(m, x, math.inf, scaled, saturated=True)
    return BesselEval(m, x, math.exp(x) * scaled, scaled)


def _scaled_i(m: int, x: float) -> float:
    """Fast path for e^{-x} I_m(x)."""
    if x <= SERIES_ASYMPTOTIC_SWITCH:
        return math.exp(-x) * _series_unscaled(m, x)
    return _asymptotic_scaled(m, x)


def ntilde_analytic(n0: float, chi: float) -> float:
    """Vacuum-conditioned intensity of phase-randomized light at polar angle chi.

    Evaluated in scaled form n0 e^{-n0 (1 - sin chi)} [i0e + sin chi * i1e] so
    the exponentially growing Bessel factors never overflow.
    """
    if n0 < 0.0:
        raise ValueError(f"mean intensity must be nonnegative, got {n0!r}")
    # I0 is even and sin(chi) I1(n0 sin chi) is even in sin(chi), so the
    # absolute value covers chi outside [0, pi] as well.
    s = abs(math.sin(chi))
    z = n0 * s
    scaled = _scaled_i(0, z) + s * _scaled_i(1, z)
    return n0 * math.exp(-n0 * (1.0 - s)) * scaled


def ntilde_quadrature(n0: float, chi: float, delta: float = 0.0, panels: int = 512) -> float:
    """Phase-average route to the same intensity, by trapezoidal quadrature.

    Integrates n0 [1 + sin chi cos(theta + delta)] e^{n0 (sin chi cos(theta + delta) - 1)}
    over one period of the mode-phase difference theta; the result is
    delta-independent up to quadrature error.  The integrand is smooth and
    periodic, so the trapezoid rule converges spectrally.
    """
    if n0 < 0.0:
        raise ValueError(f"mean intensity must be nonnegative, got {n0!r}")
    if panels < 64:
        raise ValueError(f"need at least 64 panels, got {panels}")
    theta = np.linspace(0.0, 2.0 * math.pi, panels, endpoint=False)
    s = math.sin(chi)
    projection = s * np.cos(theta + delta)
    integrand = n0 * (1.0 + projection) * np.exp(n0 * (projection - 1.0))
    return float(np.mean(integrand))


def dop_second_analytic(n0: float) -> float:
    """Closed-form vacuum-projected degree of polarization (I(n0)-1)/(I(n0)+1).

    Computed from scaled Bessel values as (T - e^{-n0})/(T + e^{-n0}) with
    T = e^{-n0} I(n0), which stays finite for arbitrarily large n0.
    """
    if n0 < 0.0:
        raise ValueError(f"mean intensity must be nonnegative, got {n0!r}")
    scaled_sum = _scaled_i(0, n0) + _scaled_i(1, n0)
    damping = math.exp(-n0)  # underflow to 0 for huge n0 is the right limit
    return (scaled_sum - damping) / (scaled_sum + damping)


def fourth_moment_analytic(a0_squared: float, theta: float) -> float:
    """Fourth-order directional moment of phase-randomized light: (A0^4/4)(5 - cos 4 theta)."""
    if a0_squared < 0.0:
        raise ValueError(f"squared amplitude must be nonnegative, got {a0_squared!r}")
    return (a0_squared**2 / 4.0) * (5.0 - math.cos(4.0 * theta))
