"""Intensity functionals, their extremization on the sphere, and both DOPs.

Two intensity readings compete: the plain mean photon number along a
direction, and the mean photon number conditioned on vacuum in the
orthogonal mode.  Each is extremized over the Poincare sphere by a
deterministic coarse grid followed by coordinate-wise golden-section
refinement; the surfaces are smooth and low-dimensional, so the grid guards
against local traps and the refinement polishes the extremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    DensityOperator,
    FockState,
    Mode,
    MomentOrder,
    annihilation_matrix,
    apply_annihilation,
    normally_ordered_moment,
)
from .poincare import PolarizationVector, wrap_angle

METHOD_FIRST = "first"
METHOD_SECOND = "second"
DEGENERATE_FLOOR = 1e-14
DEFAULT_GRID = (64, 64)
DEFAULT_REFINE_TOL = 1e-10
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_BRACKET_WIDTH_TOL = 1e-12
_MAX_ROUNDS = 60


@dataclass(frozen=True)
class DopReport:
    """Extremal intensities, extremizing directions and the resulting DOP."""

    method: str
    max_intensity: float
    min_intensity: float
    argmax: PolarizationVector
    argmin: PolarizationVector
    dop: float
    degenerate: bool
    grid_resolution: tuple[int, int]
    refinement_iterations: int


@dataclass(frozen=True)
class PolarizationIndexResult:
    """Outcome of the perfect-polarization criterion on a pure state.

    ``p`` is the complex amplitude ratio when defined; a y-polarized state
    (no x-mode signal) and the vacuum are flagged instead.  ``residual`` is
    scale-relative: the least-squares misfit divided by the y-signal norm
    whenever that norm exceeds 1.
    """

    polarized: bool
    residual: float
    p: complex | None = None
    y_polarized: bool = False
    vacuum: bool = False
    amplitude_ratio: float | None = None
    phase_difference: float | None = None


def _first_form(rho: DensityOperator):
    """Direction-resolved mean photon number as a closed form over the grid.

    The three second-order moments fix the whole surface:
    value = |ex|^2 <nx> + |ey|^2 <ny> + 2 Re(ex ey^* <ax^dag ay>).
    """
    mean_x = normally_ordered_moment(rho, MomentOrder(1, 0, 1, 0)).real
    mean_y = normally_ordered_moment(rho, MomentOrder(0, 1, 0, 1)).real
    cross = normally_ordered_moment(rho, MomentOrder(1, 0, 0, 1))

    def evaluate(chi, delta):
        chi = np.asarray(chi, dtype=float)
        delta = np.asarray(delta, dtype=float)
        eps_x = np.cos(chi / 2.0) * np.exp(-0.5j * delta)
        eps_y = np.sin(chi / 2.0) * np.exp(+0.5j * delta)
        return (
            np.abs(eps_x) ** 2 * mean_x
            + np.abs(eps_y) ** 2 * mean_y
            + 2.0 * np.real(eps_x * np.conj(eps_y) * cross)
        )

    return evaluate


def _second_form(rho: DensityOperator):
    """Vacuum-conditioned intensity via per-manifold blocks of the density.

    For each total photon number n the only matrix elements that matter are
    those within the antidiagonal manifold {(k, n-k)}; the direction enters
    through the binomial coefficient vector of the rotated n-photon state.
    """
    cutoff = rho.cutoff
    d = cutoff + 1
    blocks = []
    sqrt_binom = []
    for n in range(1, cutoff + 1):
        k = np.arange(n + 1)
        flat = k * d + (n - k)
        blocks.append(rho.matrix[np.ix_(flat, flat)])
        sqrt_binom.append(np.sqrt([math.comb(n, int(i)) for i in k]))

    def evaluate(chi, delta):
        chi = np.asarray(chi, dtype=float)
        delta = np.asarray(delta, dtype=float)
        shape = np.broadcast_shapes(chi.shape, delta.shape)
        chi_flat = np.broadcast_to(chi, shape).reshape(-1)
        delta_flat = np.broadcast_to(delta, shape).reshape(-1)
        eps_x = np.cos(chi_flat / 2.0) * np.exp(-0.5j * delta_flat)
        eps_y = np.sin(chi_flat / 2.0) * np.exp(+0.5j * delta_flat)
        count = eps_x.size
        powers_x = np.empty((count, d), dtype=complex)
        powers_y = np.empty((count, d), dtype=complex)
        powers_x[:, 0] = 1.0
        powers_y[:, 0] = 1.0
        for k in range(1, d):
            powers_x[:, k] = powers_x[:, k - 1] * eps_x
            powers_y[:, k] = powers_y[:, k - 1] * eps_y
        total = np.zeros(count)
        for n in range(1, cutoff + 1):
            coeffs = sqrt_binom[n - 1][None, :] * powers_x[:, : n + 1] * powers_y[:, n::-1]
            acted = coeffs @ blocks[n - 1]
            total += n * np.einsum("dk,dk->d", np.conj(coeffs), acted).real
        return total.reshape(shape)

    return evaluate


def _make_evaluator(rho: DensityOperator, method: str):
    if method == METHOD_FIRST:
        return _first_form(rho)
    if method == METHOD_SECOND:
        return _second_form(rho)
    raise ValueError(f"method must be '{METHOD_FIRST}' or '{METHOD_SECOND}', got {method!r}")


def intensity_first(rho: DensityOperator, v: PolarizationVector) -> float:
    """Mean photon number along the direction v."""
    return float(_first_form(rho)(v.chi, v.delta))


def intensity_second(rho: DensityOperator, v: PolarizationVector) -> float:
    """Mean photon number along v conditioned on vacuum in the orthogonal mode.

    Equals sum_n n <n,0|rho|n,0> over rotated n-photon states; rotated_fock_vector
    provides the same expansion one state at a time.
    """
    return float(_second_form(rho)(v.chi, v.delta))


def _golden_section(scalar, lo: float, hi: float, maximize: bool):
    """Golden-section search on [lo, hi]; returns (argbest, best)."""
    sign = 1.0 if maximize else -1.0
    if hi - lo < _BRACKET_WIDTH_TOL:
        mid = 0.5 * (lo + hi)
        return mid, scalar(mid)
    inner_lo = hi - _GOLDEN * (hi - lo)
    inner_hi = lo + _GOLDEN * (hi - lo)
    value_lo = scalar(inner_lo)
    value_hi = scalar(inner_hi)
    while hi - lo > _BRACKET_WIDTH_TOL:
        if sign * value_lo > sign * value_hi:
            hi, inner_hi, value_hi = inner_hi, inner_lo, value_lo
            inner_lo = hi - _GOLDEN * (hi - lo)
            value_lo = scalar(inner_lo)
        else:
            lo, inner_lo, value_lo = inner_lo, inner_hi, value_hi
            inner_hi = lo + _GOLDEN * (hi - lo)
            value_hi = scalar(inner_hi)
    best = inner_lo if sign * value_lo >= sign * value_hi else inner_hi
    return best, scalar(best)


def _refine(evaluate, chi: float, delta: float, value: float, half_chi: float,
            half_delta: float, refine_tol: float, maximize: bool):
    """Alternate golden-section sweeps in chi and delta until the value stalls."""
    sign = 1.0 if maximize else -1.0
    rounds = 0
    for _ in range(_MAX_ROUNDS):
        rounds += 1
        start = value
        chi, value = _golden_section(
            lambda x: float(evaluate(x, delta)),
            max(0.0, chi - half_chi),
            min(math.pi, chi + half_chi),
            maximize,
        )
        delta, value = _golden_section(
            lambda y: float(evaluate(chi, y)), delta - half_delta, delta + half_delta, maximize
        )
        if sign * (value - start) < refine_tol:
            break
    return chi, wrap_angle(delta), value, rounds


def extremize_intensity(
    rho: DensityOperator,
    method: str,
    coarse_grid: tuple[int, int] = DEFAULT_GRID,
    refine_tol: float = DEFAULT_REFINE_TOL,
) -> DopReport:
    """Extremize an intensity functional over the sphere and report the DOP.

    A degenerate input (both extrema under the floor, e.g. the vacuum) yields
    dop = 0 with the degenerate flag set rather than an error.
    """
    n_chi, n_delta = coarse_grid
    if n_chi < 2 or n_delta < 2:
        raise ValueError(f"coarse grid must be at least 2x2, got {coarse_grid}")
    evaluate = _make_evaluator(rho, method)
    chis = np.linspace(0.0, math.pi, n_chi)
    deltas = -math.pi + 2.0 * math.pi * np.arange(1, n_delta + 1) / n_delta
    grid_chi, grid_delta = np.meshgrid(chis, deltas, indexing="ij")
    values = evaluate(grid_chi, grid_delta)

    half_chi = math.pi / (n_chi - 1)
    half_delta = 2.0 * math.pi / n_delta
    results = {}
    iterations = 0
    for maximize in (True, False):
        flat = int(np.argmax(values) if maximize else np.argmin(values))
        chi0 = float(grid_chi.reshape(-1)[flat])
        delta0 = float(grid_delta.reshape(-1)[flat])
        value0 = float(values.reshape(-1)[flat])
        chi, delta, value, rounds = _refine(
            evaluate, chi0, delta0, value0, half_chi, half_delta, refine_tol, maximize
        )
        results[maximize] = (PolarizationVector(chi, delta).canonical(), value)
        iterations += rounds

    argmax, vmax = results[True]
    argmin, vmin = results[False]
    # Rounding in the quadratic forms can dip a few 1e-17 below zero; the
    # report contract is max >= min >= 0.
    vmax = max(vmax, 0.0)
    vmin = min(max(vmin, 0.0), vmax)
    degenerate = (vmax + vmin) < DEGENERATE_FLOOR
    dop = 0.0 if degenerate else min(max((vmax - vmin) / (vmax + vmin), 0.0), 1.0)
    return DopReport(
        method=method,
        max_intensity=vmax,
        min_intensity=vmin,
        argmax=argmax,
        argmin=argmin,
        dop=dop,
        degenerate=degenerate,
        grid_resolution=(n_chi, n_delta),
        refinement_iterations=iterations,
    )


def dop_first(rho: DensityOperator) -> DopReport:
    """DOP from extremized plain mean photon numbers (default search settings)."""
    return extremize_intensity(rho, METHOD_FIRST)


def dop_second(rho: DensityOperator) -> DopReport:
    """DOP from extremized vacuum-conditioned intensities (default search settings)."""
    return extremize_intensity(rho, METHOD_SECOND)


def _index_result(p: complex, residual: float, tol: float) -> PolarizationIndexResult:
    return PolarizationIndexResult(
        polarized=residual < tol,
        residual=residual,
        p=p,
        amplitude_ratio=abs(p),
        phase_difference=math.atan2(p.imag, p.real),
    )


def perfect_polarization_index(psi: FockState, tol: float = 1e-10) -> PolarizationIndexResult:
    """Test whether a normalized pure state is perfectly polarized.

    Solves a_y|psi> = p a_x|psi> by least squares: p = <u,w>/<u,u> with
    u = a_x|psi>, w = a_y|psi>, and the state passes when the scale-relative
    residual ||w - p u|| / max(1, ||w||) falls under tol.  States with no
    x-signal are reported as y-polarized (p formally infinite); the vacuum is
    trivially polarized with p undefined.
    """
    if not psi.normalized or abs(psi.norm_squared() - 1.0) > 1e-10:
        raise ValueError("perfect_polarization_index requires a normalized pure state")
    u = apply_annihilation(psi, Mode.X)
    w = apply_annihilation(psi, Mode.Y)
    norm_u = u.norm()
    norm_w = w.norm()
    if norm_u <= tol:
        if norm_w > tol:
            return PolarizationIndexResult(polarized=True, residual=0.0, y_polarized=True)
        return PolarizationIndexResult(polarized=True, residual=0.0, vacuum=True)
    p = complex(np.vdot(u.amps, w.amps) / np.vdot(u.amps, u.amps))
    misfit = float(np.linalg.norm(w.amps - p * u.amps))
    residual = misfit / max(1.0, norm_w)
    return _index_result(p, residual, tol)


def perfect_polarization_index_mixed(
    rho: DensityOperator, tol: float = 1e-10
) -> PolarizationIndexResult:
    """Mixed-state variant: least squares on a_y rho versus a_x rho in Frobenius norm."""
    u = annihilation_matrix(rho.cutoff, Mode.X) @ rho.matrix
    w = annihilation_matrix(rho.cutoff, Mode.Y) @ rho.matrix
    norm_u = float(np.linalg.norm(u))
    norm_w = float(np.linalg.norm(w))
    if norm_u <= tol:
        if norm_w > tol:
            return PolarizationIndexResult(polarized=True, residual=0.0, y_polarized=True)
        return PolarizationIndexResult(polarized=True, residual=0.0, vacuum=True)
    p = complex(np.vdot(u, w) / np.vdot(u, u))
    residual = float(np.linalg.norm(w - p * u)) / max(1.0, norm_w)
    return _index_result(p, residual, tol)
