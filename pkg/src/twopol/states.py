"""Constructors for the state families under study.

Every family has an exact truncated-Fock realization built from closed-form
matrix elements; no numerical phase integration is involved (the quadrature
route survives only as a test oracle).  Constructors enforce that the
probability discarded by truncation stays below TAIL_TOL and record the
actual tail on the returned object without re-normalizing mixed states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import CutoffTooSmallError, NormalizationError
from .fock import DensityOperator, FockState, make_pure_state

TAIL_TOL = 1e-12
# Two-mode constructors enforce TAIL_TOL on the total discarded mass, so each
# mode's truncation gets half the budget when cutoffs are chosen.
MODE_TAIL_TOL = TAIL_TOL / 2.0
WEIGHT_TRACE_TOL = 1e-10


class Family(Enum):
    """State families with a declarative, file-backed description."""

    COHERENT = "coherent"
    PHASE_RANDOMIZED_COHERENT = "phase-randomized"
    HIDDEN_POLARIZED = "hidden-polarized"
    UNPOLARIZED = "unpolarized"
    THERMAL_PRODUCT = "thermal-product"
    BIPHOTON_QUTRIT = "biphoton-qutrit"


@dataclass(frozen=True)
class UnpolarizedWeights:
    """Manifold weights B_n; trace-one requires sum_n B_n (n+1) = 1."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("weights must be a nonempty 1-d sequence")
        if np.any(values < 0.0):
            raise NormalizationError("weights must be nonnegative")
        trace = float(np.dot(values, np.arange(1, values.size + 1)))
        if abs(trace - 1.0) > WEIGHT_TRACE_TOL:
            raise NormalizationError(
                f"sum of B_n (n+1) must be 1 for unit trace, got {trace:.17g}"
            )
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def max_n(self) -> int:
        return int(self.values.size - 1)


def min_cutoff_poisson(lam: float, tol: float = MODE_TAIL_TOL) -> int:
    """Smallest N with Poisson(lam) tail mass beyond N under tol.

    The default is half the total budget so that a two-mode product built at
    this cutoff keeps its combined discarded mass below TAIL_TOL.
    """
    if lam < 0.0:
        raise ValueError(f"Poisson mean must be nonnegative, got {lam!r}")
    if lam == 0.0:
        return 0
    top = int(lam + 40.0 * math.sqrt(lam) + 60.0)
    n = np.arange(top + 1)
    log_pmf = -lam + n * math.log(lam) - np.array([math.lgamma(k + 1) for k in n])
    pmf = np.exp(log_pmf)
    # Reverse cumulative sum keeps the (tiny, all-positive) tails accurate.
    tail_beyond = np.concatenate([np.cumsum(pmf[::-1])[::-1][1:], [0.0]])
    adequate = np.nonzero(tail_beyond < tol)[0]
    return int(adequate[0])


def min_cutoff_geometric(mean: float, tol: float = MODE_TAIL_TOL) -> int:
    """Smallest N with thermal (geometric) tail mass beyond N under tol.

    Defaults to the per-mode half budget, like min_cutoff_poisson.
    """
    if mean < 0.0:
        raise ValueError(f"thermal mean must be nonnegative, got {mean!r}")
    if mean == 0.0:
        return 0
    ratio = mean / (1.0 + mean)
    # Tail beyond N is ratio^(N+1).
    return max(0, math.ceil(math.log(tol) / math.log(ratio)) - 1)


def _coherent_axis_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Single-mode coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!)."""
    amps = np.empty(cutoff + 1, dtype=complex)
    amps[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(cutoff):
        amps[n + 1] = amps[n] * alpha / math.sqrt(n + 1)
    return amps


def _require_adequate_cutoff(tail: float, cutoff: int, needed: int, label: str) -> None:
    if tail >= TAIL_TOL:
        raise CutoffTooSmallError(
            f"cutoff {cutoff} leaves a {label} tail of {tail:.3g}; "
            f"minimal adequate cutoff is {needed}",
            min_cutoff=needed,
        )


def coherent_state(alpha_x: complex, alpha_y: complex, cutoff: int) -> FockState:
    """Two-mode coherent state, normalized after truncation with the tail reported."""
    ax = _coherent_axis_amplitudes(complex(alpha_x), cutoff)
    ay = _coherent_axis_amplitudes(complex(alpha_y), cutoff)
    amps = np.outer(ax, ay)
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    tail = 1.0 - norm_sq
    needed = max(
        min_cutoff_poisson(abs(alpha_x) ** 2), min_cutoff_poisson(abs(alpha_y) ** 2)
    )
    _require_adequate_cutoff(tail, cutoff, needed, "Poisson")
    amps /= math.sqrt(norm_sq)
    return FockState(cutoff, amps, normalized=True, lost_mass=max(tail, 0.0))


def phase_randomized_coherent(n0: float, cutoff: int) -> DensityOperator:
    """Amplitude-stabilized light with both mode phases independently uniform.

    Fock-diagonal with weight e^{-2 n0} n0^(n_x + n_y) / (n_x! n_y!): the
    product of two independent Poisson photon-number distributions.
    """
    if n0 < 0.0:
        raise ValueError(f"mean intensity must be nonnegative, got {n0!r}")
    amps = _coherent_axis_amplitudes(math.sqrt(n0), cutoff)
    weights = np.outer(np.abs(amps) ** 2, np.abs(amps) ** 2).reshape(-1)
    tail = 1.0 - float(weights.sum())
    _require_adequate_cutoff(tail, cutoff, min_cutoff_poisson(n0), "Poisson")
    return DensityOperator(cutoff, np.diag(weights.astype(complex)), tail_mass=max(tail, 0.0))


def hidden_polarized(n0: float, cutoff: int) -> DensityOperator:
    """Amplitude-stabilized light with anti-correlated mode phases.

    Averaging over the common phase kills every coherence except those with
    n_x - n_y = m_x - m_y, leaving matrix elements
    e^{-2 n0} n0^((n_x+n_y+m_x+m_y)/2) / sqrt(n_x! n_y! m_x! m_y!) on that
    band; the diagonal coincides with the fully phase-randomized state.
    """
    if n0 < 0.0:
        raise ValueError(f"mean intensity must be nonnegative, got {n0!r}")
    root = math.sqrt(n0)
    amps = np.outer(
        _coherent_axis_amplitudes(root, cutoff), _coherent_axis_amplitudes(root, cutoff)
    )
    vec = amps.reshape(-1)
    tail = 1.0 - float(np.sum(np.abs(vec) ** 2))
    _require_adequate_cutoff(tail, cutoff, min_cutoff_poisson(n0), "Poisson")
    d = cutoff + 1
    difference = (np.arange(d)[:, None] - np.arange(d)[None, :]).reshape(-1)
    matrix = np.outer(vec, vec.conj())
    matrix[difference[:, None] != difference[None, :]] = 0.0
    return DensityOperator(cutoff, matrix, tail_mass=max(tail, 0.0))


def unpolarized(weights: UnpolarizedWeights, cutoff: int) -> DensityOperator:
    """Block-uniform density: weight B_n on every state of the n-photon manifold."""
    if not isinstance(weights, UnpolarizedWeights):
        weights = UnpolarizedWeights(np.asarray(weights, dtype=float))
    if weights.max_n > cutoff:
        raise ValueError(
            f"weights reach the {weights.max_n}-photon manifold but cutoff is {cutoff}"
        )
    d = cutoff + 1
    diagonal = np.zeros(d * d)
    for n, b_n in enumerate(weights.values):
        for r in range(n + 1):
            diagonal[r * d + (n - r)] = b_n
    return DensityOperator(cutoff, np.diag(diagonal.astype(complex)))


def thermal_product(mean: float, cutoff: int) -> DensityOperator:
    """Product of single-mode thermal states with the given mean each."""
    if mean < 0.0:
        raise ValueError(f"thermal mean must be nonnegative, got {mean!r}")
    needed = min_cutoff_geometric(mean)
    ratio = mean / (1.0 + mean)
    single = (1.0 / (1.0 + mean)) * ratio ** np.arange(cutoff + 1)
    weights = np.outer(single, single).reshape(-1)
    tail = 1.0 - float(weights.sum())
    _require_adequate_cutoff(tail, cutoff, needed, "geometric")
    return DensityOperator(cutoff, np.diag(weights.astype(complex)), tail_mass=max(tail, 0.0))


def biphoton_qutrit(cutoff: int = 2) -> FockState:
    """The two-photon demonstration state (1/3)|2,0> + (2/3)|1,1> + (2/3)|0,2>."""
    if cutoff < 2:
        raise ValueError("the qutrit needs cutoff >= 2")
    return make_pure_state(
        [(2, 0, 1.0 / 3.0), (1, 1, 2.0 / 3.0), (0, 2, 2.0 / 3.0)], cutoff, normalize=False
    )


@dataclass(frozen=True)
class StateFamily:
    """Declarative description of a state family, its parameters and cutoff.

    ``cutoff=None`` selects the smallest truncation with tail below TAIL_TOL
    when the family is built.
    """

    family: Family
    params: dict = field(default_factory=dict)
    cutoff: int | None = None

    _REQUIRED = {
        Family.COHERENT: ("alpha_x_re", "alpha_y_re"),
        Family.PHASE_RANDOMIZED_COHERENT: ("n0",),
        Family.HIDDEN_POLARIZED: ("n0",),
        Family.THERMAL_PRODUCT: ("mean",),
        Family.UNPOLARIZED: (),
        Family.BIPHOTON_QUTRIT: (),
    }

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        missing = [key for key in self._REQUIRED[self.family] if key not in self.params]
        if missing:
            raise ValueError(f"family {self.family.value} is missing parameters {missing}")
        if self.family is Family.UNPOLARIZED and not self._weight_items():
            raise ValueError("family unpolarized needs at least one B<n> weight")

    def _weight_items(self) -> list[tuple[int, float]]:
        items = []
        for key, value in self.params.items():
            if key.startswith("B") and key[1:].isdigit():
                items.append((int(key[1:]), float(value)))
        return sorted(items)

    def _alphas(self) -> tuple[complex, complex]:
        return (
            complex(self.params["alpha_x_re"], self.params.get("alpha_x_im", 0.0)),
            complex(self.params["alpha_y_re"], self.params.get("alpha_y_im", 0.0)),
        )

    def default_cutoff(self) -> int:
        family = self.family
        if family is Family.COHERENT:
            ax, ay = self._alphas()
            return max(min_cutoff_poisson(abs(ax) ** 2), min_cutoff_poisson(abs(ay) ** 2))
        if family in (Family.PHASE_RANDOMIZED_COHERENT, Family.HIDDEN_POLARIZED):
            return min_cutoff_poisson(float(self.params["n0"]))
        if family is Family.THERMAL_PRODUCT:
            return min_cutoff_geometric(float(self.params["mean"]))
        if family is Family.UNPOLARIZED:
            return max(n for n, _ in self._weight_items())
        return 2  # biphoton qutrit

    def resolved_cutoff(self) -> int:
        return self.cutoff if self.cutoff is not None else self.default_cutoff()

    def build(self):
        """Realize the family as a FockState (pure) or DensityOperator (mixed)."""
        cutoff = self.resolved_cutoff()
        family = self.family
        if family is Family.COHERENT:
            return coherent_state(*self._alphas(), cutoff)
        if family is Family.PHASE_RANDOMIZED_COHERENT:
            return phase_randomized_coherent(float(self.params["n0"]), cutoff)
        if family is Family.HIDDEN_POLARIZED:
            return hidden_polarized(float(self.params["n0"]), cutoff)
        if family is Family.THERMAL_PRODUCT:
            return thermal_product(float(self.params["mean"]), cutoff)
        if family is Family.UNPOLARIZED:
            items = self._weight_items()
            values = np.zeros(max(n for n, _ in items) + 1)
            for n, b_n in items:
                values[n] = b_n
            return unpolarized(UnpolarizedWeights(values), cutoff)
        return biphoton_qutrit(cutoff)

    @property
    def is_pure(self) -> bool:
        return self.family in (Family.COHERENT, Family.BIPHOTON_QUTRIT)


def scale_intensity(spec: StateFamily, m: float) -> StateFamily:
    """Scale the family's mean intensity by m > 0 without changing its structure.

    Amplitude parameters scale by sqrt(m), intensity parameters by m.  The
    qutrit and explicit unpolarized weights have no amplitude scale.
    """
    if m <= 0.0:
        raise ValueError(f"scale factor must be positive, got {m!r}")
    family = spec.family
    params = dict(spec.params)
    if family is Family.COHERENT:
        root = math.sqrt(m)
        for key in ("alpha_x_re", "alpha_x_im", "alpha_y_re", "alpha_y_im"):
            if key in params:
                params[key] = params[key] * root
    elif family in (Family.PHASE_RANDOMIZED_COHERENT, Family.HIDDEN_POLARIZED):
        params["n0"] = params["n0"] * m
    elif family is Family.THERMAL_PRODUCT:
        params["mean"] = params["mean"] * m
    else:
        raise ValueError(f"family {family.value} has no amplitude scale to adjust")
    return StateFamily(family, params, spec.cutoff)
