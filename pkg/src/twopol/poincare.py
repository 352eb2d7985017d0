"""Poincare-sphere directions and the SU(2) change of polarization basis.

A direction is the pair (chi, delta) with polar angle chi in [0, pi] and
azimuth delta in (-pi, pi].  Its Jones components are fixed to the single
convention eps_x = cos(chi/2) e^{-i delta/2}, eps_y = sin(chi/2) e^{+i delta/2};
global phases cancel in every observable, but one convention is pinned so
golden files stay bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .fock import DensityOperator, FockState, basis_index, normally_ordered_moment

# Within this angle of a pole the azimuth moves the direction by less than
# double precision can resolve in any intensity, so reports snap to the pole.
POLE_TOL = 1e-6


def wrap_angle(angle: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    out = (angle + math.pi) % (2.0 * math.pi) - math.pi
    if out <= -math.pi:
        out += 2.0 * math.pi
    return out


@dataclass(frozen=True)
class PolarizationVector:
    """Point on the Poincare sphere with derived Jones components."""

    chi: float
    delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.chi <= math.pi:
            raise ValueError(f"chi must lie in [0, pi], got {self.chi!r}")
        object.__setattr__(self, "delta", wrap_angle(self.delta))

    @property
    def eps_x(self) -> complex:
        return math.cos(self.chi / 2.0) * np.exp(-0.5j * self.delta)

    @property
    def eps_y(self) -> complex:
        return math.sin(self.chi / 2.0) * np.exp(+0.5j * self.delta)

    def components(self) -> np.ndarray:
        return np.array([self.eps_x, self.eps_y], dtype=complex)

    def canonical(self) -> "PolarizationVector":
        """Snap pole-adjacent directions to the exact pole with delta = 0."""
        if self.chi < POLE_TOL:
            return PolarizationVector(0.0, 0.0)
        if math.pi - self.chi < POLE_TOL:
            return PolarizationVector(math.pi, 0.0)
        return self

    @classmethod
    def from_components(cls, eps_x: complex, eps_y: complex) -> "PolarizationVector":
        """Direction of a (nonzero) Jones vector, global phase discarded."""
        ax, ay = abs(eps_x), abs(eps_y)
        if ax == 0.0 and ay == 0.0:
            raise ValueError("zero Jones vector has no direction")
        chi = 2.0 * math.atan2(ay, ax)
        if ax == 0.0 or ay == 0.0:
            delta = 0.0
        else:
            delta = wrap_angle(np.angle(complex(eps_y) / complex(eps_x)))
        return cls(chi, delta)


def orthogonal_vector(v: PolarizationVector) -> np.ndarray:
    """Jones components orthonormal to v.

    Together with v's components they form the rows of a unitary basis
    change; the partner equals the antipodal direction (pi - chi, delta + pi)
    up to a global phase.
    """
    half = v.chi / 2.0
    return np.array(
        [
            math.sin(half) * np.exp(-0.5j * v.delta),
            -math.cos(half) * np.exp(+0.5j * v.delta),
        ],
        dtype=complex,
    )


def transform_annihilation_coefficients(v: PolarizationVector) -> np.ndarray:
    """Unitary 2x2 matrix mapping (a_x, a_y) to the rotated mode operators.

    Row 0 gives the annihilation operator along v, row 1 along its orthogonal
    partner: a_along = eps_x^* a_x + eps_y^* a_y.
    """
    ortho = orthogonal_vector(v)
    return np.array(
        [
            [np.conj(v.eps_x), np.conj(v.eps_y)],
            [np.conj(ortho[0]), np.conj(ortho[1])],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class RotatedFockVector:
    """|n photons along direction, 0 orthogonal> expanded over |k, n-k>."""

    n: int
    direction: PolarizationVector
    expansion: FockState


def rotated_coefficients(n: int, eps_x: complex, eps_y: complex) -> np.ndarray:
    """Coefficients on |k, n-k>, k = 0..n: sqrt(C(n,k)) eps_x^k eps_y^(n-k)."""
    coeffs = np.empty(n + 1, dtype=complex)
    for k in range(n + 1):
        coeffs[k] = math.sqrt(math.comb(n, k)) * eps_x**k * eps_y ** (n - k)
    return coeffs


def rotated_fock_vector(n: int, v: PolarizationVector, cutoff: int) -> RotatedFockVector:
    """Expand the n-photon state along v in the computational basis."""
    if n < 0:
        raise ValueError("photon count must be nonnegative")
    if n > cutoff:
        raise ValueError(f"photon count {n} exceeds cutoff {cutoff}")
    coeffs = rotated_coefficients(n, v.eps_x, v.eps_y)
    d = cutoff + 1
    amps = np.zeros((d, d), dtype=complex)
    for k in range(n + 1):
        amps[k, n - k] = coeffs[k]
    return RotatedFockVector(n, v, FockState(cutoff, amps))


def fock_basis_change(v: PolarizationVector, cutoff: int) -> np.ndarray:
    """Basis-change matrix whose columns are rotated two-mode basis states.

    Column (k, l) is the expansion of the state with k photons along v and l
    along its orthogonal partner.  The map is block-diagonal in total photon
    number n and unitary on the sector n <= cutoff; columns for n beyond the
    cutoff are zero because the square truncation cuts those manifolds short.
    On sector-supported states U^dag a_x U acts as the annihilation operator
    along v, so intensity(rho, v) equals intensity(U^dag rho U, x-axis).
    """
    d = cutoff + 1
    ortho = orthogonal_vector(v)
    u = np.zeros((d * d, d * d), dtype=complex)
    log_fact = [math.lgamma(m + 1) for m in range(2 * cutoff + 1)]
    for k in range(d):
        # Coefficients of (a_x^dag)^i (a_y^dag)^(k-i) in the k-th power along v.
        along = np.array(
            [math.comb(k, i) * v.eps_x**i * v.eps_y ** (k - i) for i in range(k + 1)]
        )
        for l in range(d):
            n = k + l
            if n > cutoff:
                continue
            across = np.array(
                [math.comb(l, j) * ortho[0] ** j * ortho[1] ** (l - j) for j in range(l + 1)]
            )
            poly = np.convolve(along, across)
            column = basis_index(k, l, cutoff)
            for m in range(n + 1):
                scale = math.exp(
                    0.5 * (log_fact[m] + log_fact[n - m] - log_fact[k] - log_fact[l])
                )
                u[basis_index(m, n - m, cutoff), column] = poly[m] * scale
    return u


def stokes_parameters(rho: DensityOperator) -> tuple[float, float, float, float]:
    """(S0, S1, S2, S3) from second-order normally ordered moments."""
    mean_x = normally_ordered_moment(rho, fock.MomentOrder(1, 0, 1, 0)).real
    mean_y = normally_ordered_moment(rho, fock.MomentOrder(0, 1, 0, 1)).real
    cross = normally_ordered_moment(rho, fock.MomentOrder(1, 0, 0, 1))
    return (
        mean_x + mean_y,
        mean_x - mean_y,
        2.0 * cross.real,
        2.0 * cross.imag,
    )
