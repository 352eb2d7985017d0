"""Truncated two-mode Fock space: states, densities, ladder algebra.

Basis states |n_x, n_y> hold at most ``cutoff`` photons per mode.  Flattened
vectors and matrices enumerate the basis row-major in (n_x, n_y); that
ordering is part of the on-disk format contract and must not change.

All values are immutable after construction and every operation is a pure
function of its inputs, so concurrent readers need no coordination.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateStateError, NormalizationError, TruncationWarning

NORM_TOL = 1e-12
TRACE_TOL = 1e-10
HERMITICITY_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10


class Mode(Enum):
    """The two transverse polarization modes."""

    X = "x"
    Y = "y"

    @property
    def axis(self) -> int:
        """Array axis of the amplitude table this mode indexes."""
        return 0 if self is Mode.X else 1


@dataclass(frozen=True)
class MomentOrder:
    """Powers (p, q, r, s) of a_x^dag, a_y^dag, a_x, a_y in a normally ordered product."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"moment power {name} must be a nonnegative integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.p + self.q + self.r + self.s


def basis_index(n_x: int, n_y: int, cutoff: int) -> int:
    """Flat index of |n_x, n_y> (row-major in (n_x, n_y))."""
    return n_x * (cutoff + 1) + n_y


def basis_occupations(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (n_x, n_y) of occupations per flat basis index."""
    d = cutoff + 1
    n_x = np.repeat(np.arange(d), d)
    n_y = np.tile(np.arange(d), d)
    return n_x, n_y


def _frozen_complex(array, shape) -> np.ndarray:
    out = np.array(array, dtype=complex)
    if out.shape != shape:
        raise ValueError(f"expected array of shape {shape}, got {out.shape}")
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FockState:
    """Pure two-mode state as an amplitude table ``amps[n_x, n_y]``.

    ``normalized`` marks whether the unit-norm invariant is in force; ladder
    operations return flagged unnormalized intermediates (including explicit
    zero vectors, e.g. after annihilating the vacuum).  ``lost_mass``
    accumulates squared amplitude discarded by truncation; it is carried, the
    state is never silently re-normalized.
    """

    cutoff: int
    amps: np.ndarray
    normalized: bool = True
    lost_mass: float = 0.0

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        d = self.cutoff + 1
        object.__setattr__(self, "amps", _frozen_complex(self.amps, (d, d)))
        if self.normalized and abs(self.norm_squared() - 1.0) > NORM_TOL:
            raise NormalizationError(
                f"state flagged normalized has squared norm {self.norm_squared():.17g}"
            )

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def amplitude(self, n_x: int, n_y: int) -> complex:
        if not (0 <= n_x <= self.cutoff and 0 <= n_y <= self.cutoff):
            raise ValueError(f"index ({n_x}, {n_y}) outside cutoff {self.cutoff}")
        return complex(self.amps[n_x, n_y])

    def as_vector(self) -> np.ndarray:
        """Flattened amplitudes, row-major in (n_x, n_y)."""
        return self.amps.reshape(-1)

    def overlap(self, other: "FockState") -> complex:
        """Inner product <self|other>."""
        if other.cutoff != self.cutoff:
            raise ValueError("states live in different truncations")
        return complex(np.vdot(self.amps, other.amps))


def make_pure_state(entries, cutoff: int, normalize: bool = True) -> FockState:
    """Build a pure state from (n_x, n_y, amplitude) entries.

    With ``normalize`` the amplitudes are scaled to unit norm; an all-zero
    table is then rejected.  Without it the result carries the exact
    amplitudes and the normalized flag reflects their actual norm.
    """
    d = cutoff + 1
    amps = np.zeros((d, d), dtype=complex)
    for n_x, n_y, amp in entries:
        if not (0 <= n_x <= cutoff and 0 <= n_y <= cutoff):
            raise ValueError(f"index ({n_x}, {n_y}) outside cutoff {cutoff}")
        amps[n_x, n_y] = complex(amp)
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    if normalize:
        if norm_sq == 0.0:
            raise DegenerateStateError("cannot normalize an all-zero amplitude table")
        amps /= math.sqrt(norm_sq)
        return FockState(cutoff, amps)
    return FockState(cutoff, amps, normalized=abs(norm_sq - 1.0) <= NORM_TOL)


def vacuum_state(cutoff: int) -> FockState:
    return make_pure_state([(0, 0, 1.0)], cutoff, normalize=False)


def _lowered(amps: np.ndarray, axis: int) -> np.ndarray:
    """Ladder-down along one mode: a|n> = sqrt(n)|n-1>.  Nothing truncates."""
    d = amps.shape[0]
    out = np.zeros_like(amps)
    root = np.sqrt(np.arange(1, d))
    if axis == 0:
        out[:-1, :] = root[:, None] * amps[1:, :]
    else:
        out[:, :-1] = root[None, :] * amps[:, 1:]
    return out


def _raised(amps: np.ndarray, axis: int) -> tuple[np.ndarray, float]:
    """Ladder-up along one mode; returns (table, squared mass pushed past cutoff)."""
    d = amps.shape[0]
    out = np.zeros_like(amps)
    root = np.sqrt(np.arange(1, d))
    if axis == 0:
        out[1:, :] = root[:, None] * amps[:-1, :]
        lost = d * float(np.sum(np.abs(amps[-1, :]) ** 2))
    else:
        out[:, 1:] = root[None, :] * amps[:, :-1]
        lost = d * float(np.sum(np.abs(amps[:, -1]) ** 2))
    return out, lost


def apply_annihilation(state: FockState, mode: Mode) -> FockState:
    """Apply the annihilation operator of ``mode``; result flagged unnormalized."""
    out = _lowered(state.amps, mode.axis)
    return FockState(state.cutoff, out, normalized=False, lost_mass=state.lost_mass)


def apply_creation(state: FockState, mode: Mode) -> FockState:
    """Apply the creation operator of ``mode``.

    Amplitudes pushed past the cutoff are dropped; the discarded squared mass
    (cutoff+1 times the top-level occupancy) is added to ``lost_mass``.
    """
    out, lost = _raised(state.amps, mode.axis)
    return FockState(state.cutoff, out, normalized=False, lost_mass=state.lost_mass + lost)


def apply_inverse_annihilation_x(state: FockState) -> FockState:
    """Right inverse of x-mode annihilation: |n_x> -> |n_x + 1>/sqrt(n_x + 1).

    Equals creation composed after (1 + n_x)^-1.  The top level is pushed past
    the cutoff; its (small) squared mass is recorded like in apply_creation.
    """
    d = state.dim
    out = np.zeros_like(state.amps)
    inv_root = 1.0 / np.sqrt(np.arange(1, d))
    out[1:, :] = inv_root[:, None] * state.amps[:-1, :]
    lost = float(np.sum(np.abs(state.amps[-1, :]) ** 2)) / d
    return FockState(state.cutoff, out, normalized=False, lost_mass=state.lost_mass + lost)


def apply_vacuum_projector(obj, mode: Mode):
    """Project onto the zero-photon subspace of ``mode`` (idempotent).

    Accepts a FockState or a DensityOperator and returns the same kind; the
    normalized flag is re-derived from the projected norm/trace.
    """
    if isinstance(obj, FockState):
        out = np.zeros_like(obj.amps)
        if mode is Mode.X:
            out[0, :] = obj.amps[0, :]
        else:
            out[:, 0] = obj.amps[:, 0]
        norm_sq = float(np.sum(np.abs(out) ** 2))
        return FockState(
            obj.cutoff, out, normalized=abs(norm_sq - 1.0) <= NORM_TOL, lost_mass=obj.lost_mass
        )
    if isinstance(obj, DensityOperator):
        d = obj.dim
        keep = np.zeros(d * d, dtype=bool)
        n_x, n_y = basis_occupations(obj.cutoff)
        keep[(n_x if mode is Mode.X else n_y) == 0] = True
        out = np.where(np.outer(keep, keep), obj.matrix, 0.0)
        trace = float(np.real(np.trace(out)))
        return DensityOperator(
            obj.cutoff, out, normalized=abs(trace - 1.0) <= TRACE_TOL, tail_mass=obj.tail_mass
        )
    raise TypeError(f"expected FockState or DensityOperator, got {type(obj).__name__}")


@dataclass(frozen=True)
class DensityOperator:
    """Mixed two-mode state over the truncated basis, flattened row-major.

    Invariants for normalized densities: Hermitian within 1e-12, unit trace
    within 1e-10, smallest eigenvalue >= -1e-10 (checked by validate();
    construction checks only the cheap ones).  ``tail_mass`` records
    probability discarded by the constructor's truncation; it is reported,
    never folded back by re-normalization.
    """

    cutoff: int
    matrix: np.ndarray
    normalized: bool = True
    tail_mass: float = 0.0

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        d2 = (self.cutoff + 1) ** 2
        object.__setattr__(self, "matrix", _frozen_complex(self.matrix, (d2, d2)))
        deviation = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if deviation > HERMITICITY_TOL:
            raise ValueError(f"matrix deviates from Hermiticity by {deviation:.3g}")
        if self.normalized and abs(self.trace() - 1.0) > TRACE_TOL:
            raise NormalizationError(f"density flagged normalized has trace {self.trace():.17g}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))

    def mean_total_photons(self) -> float:
        """Mean of n_x + n_y read off the diagonal."""
        n_x, n_y = basis_occupations(self.cutoff)
        return float(np.dot(self.diagonal(), n_x + n_y))

    def validate(self) -> None:
        """Check all type invariants, including positive semidefiniteness.

        The eigenvalue check uses the diagonal directly when the matrix is
        diagonal, and eigvalsh otherwise (cubic in the basis size).
        """
        deviation = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if deviation > HERMITICITY_TOL:
            raise ValueError(f"Hermiticity violated by {deviation:.3g}")
        if self.normalized and abs(self.trace() - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {self.trace():.17g}, expected 1")
        off_diagonal = self.matrix - np.diag(np.diag(self.matrix))
        if np.all(off_diagonal == 0):
            smallest = float(np.min(self.diagonal()))
        else:
            smallest = float(np.linalg.eigvalsh(self.matrix)[0])
        if smallest < EIGENVALUE_FLOOR:
            raise ValueError(f"smallest eigenvalue {smallest:.3g} below floor")


def density_from_pure(state: FockState) -> DensityOperator:
    """Rank-1 density |psi><psi| of a normalized pure state."""
    if not state.normalized:
        raise NormalizationError("density_from_pure requires a normalized state")
    vec = state.as_vector()
    return DensityOperator(state.cutoff, np.outer(vec, vec.conj()), tail_mass=state.lost_mass)


def mix(weights, densities) -> DensityOperator:
    """Convex combination of densities over the same truncation."""
    weights = np.asarray(weights, dtype=float)
    densities = list(densities)
    if len(weights) != len(densities) or not densities:
        raise ValueError("need one weight per density and at least one component")
    if np.any(weights < 0.0) or abs(float(weights.sum()) - 1.0) > NORM_TOL:
        raise NormalizationError(
            f"weights must be nonnegative and sum to 1, got sum {float(weights.sum()):.17g}"
        )
    cutoff = densities[0].cutoff
    if any(rho.cutoff != cutoff for rho in densities):
        raise ValueError("densities live in different truncations")
    matrix = sum(w * rho.matrix for w, rho in zip(weights, densities))
    tail = float(sum(w * rho.tail_mass for w, rho in zip(weights, densities)))
    return DensityOperator(cutoff, matrix, tail_mass=tail)


def _falling_permutations(values: np.ndarray, k: int) -> np.ndarray:
    return np.array([math.perm(int(v), k) for v in values], dtype=float)


def normally_ordered_moment(rho: DensityOperator, order) -> complex:
    """Tr[rho a_x^dag^p a_y^dag^q a_x^r a_y^s] in the truncated space.

    Emits a TruncationWarning (and returns the partial value) when the total
    order exceeds 2*cutoff, where the truncated algebra can no longer
    represent the full product.
    """
    if not isinstance(order, MomentOrder):
        order = MomentOrder(*order)
    p, q, r, s = order.p, order.q, order.r, order.s
    cutoff = rho.cutoff
    if order.total > 2 * cutoff:
        warnings.warn(
            f"moment order {order.total} exceeds 2*cutoff = {2 * cutoff}; value is partial",
            TruncationWarning,
            stacklevel=2,
        )
    d = cutoff + 1
    # Sources m with m_x >= r, m_y >= s whose targets stay inside the cutoff.
    m_x = np.arange(r, d)
    m_x = m_x[m_x - r + p <= cutoff]
    m_y = np.arange(s, d)
    m_y = m_y[m_y - s + q <= cutoff]
    if m_x.size == 0 or m_y.size == 0:
        return 0j
    t_x = m_x - r + p
    t_y = m_y - s + q
    coeff_x = np.sqrt(_falling_permutations(m_x, r) * _falling_permutations(t_x, p))
    coeff_y = np.sqrt(_falling_permutations(m_y, s) * _falling_permutations(t_y, q))
    rows = (m_x * d)[:, None] + m_y[None, :]
    cols = (t_x * d)[:, None] + t_y[None, :]
    return complex(np.sum((coeff_x[:, None] * coeff_y[None, :]) * rho.matrix[rows, cols]))


def directional_moment(rho: DensityOperator, theta: float, num_dagger: int, num_plain: int) -> complex:
    """Normally ordered moment of the rotated mode a_theta = a_x cos(theta) + a_y sin(theta).

    Expands <a_theta^dag^N a_theta^M> binomially into the sixteen-per-order
    (p, q, r, s) moments of the computational modes.
    """
    c, s = math.cos(theta), math.sin(theta)
    total = 0j
    for i in range(num_dagger + 1):
        weight_dag = math.comb(num_dagger, i) * c**i * s ** (num_dagger - i)
        for j in range(num_plain + 1):
            weight = weight_dag * math.comb(num_plain, j) * c**j * s ** (num_plain - j)
            if weight == 0.0:
                continue
            total += weight * normally_ordered_moment(
                rho, MomentOrder(i, num_dagger - i, j, num_plain - j)
            )
    return total


# ---------------------------------------------------------------------------
# Operator matrices on flattened vectors (row-major in (n_x, n_y)).

def _single_mode_lowering(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


def annihilation_matrix(cutoff: int, mode: Mode) -> np.ndarray:
    d = cutoff + 1
    a = _single_mode_lowering(d)
    eye = np.eye(d, dtype=complex)
    return np.kron(a, eye) if mode is Mode.X else np.kron(eye, a)


def creation_matrix(cutoff: int, mode: Mode) -> np.ndarray:
    return annihilation_matrix(cutoff, mode).conj().T


def inverse_annihilation_x_matrix(cutoff: int) -> np.ndarray:
    d = cutoff + 1
    b = np.zeros((d, d), dtype=complex)
    for n in range(d - 1):
        b[n + 1, n] = 1.0 / math.sqrt(n + 1)
    return np.kron(b, np.eye(d, dtype=complex))


def vacuum_projector_matrix(cutoff: int, mode: Mode) -> np.ndarray:
    d = cutoff + 1
    p0 = np.zeros((d, d), dtype=complex)
    p0[0, 0] = 1.0
    eye = np.eye(d, dtype=complex)
    return np.kron(p0, eye) if mode is Mode.X else np.kron(eye, p0)
