"""Two-mode quantum-optics engine for degrees of polarization.

Decides whether a quantum light state is perfectly polarized, and computes
two competing degree-of-polarization functionals: one from extremized mean
photon numbers, one from intensities conditioned on vacuum in the orthogonal
mode.  Fock-space numerics are validated against closed-form modified-Bessel
expressions.
"""

__version__ = "0.1.0"

from .analytic import (
    BesselEval,
    bessel_i,
    dop_second_analytic,
    fourth_moment_analytic,
    ntilde_analytic,
    ntilde_quadrature,
)
from .dop import (
    DopReport,
    PolarizationIndexResult,
    dop_first,
    dop_second,
    extremize_intensity,
    intensity_first,
    intensity_second,
    perfect_polarization_index,
    perfect_polarization_index_mixed,
)
from .errors import (
    CutoffTooSmallError,
    DegenerateStateError,
    NormalizationError,
    SpecFileError,
    TruncationWarning,
)
from .fock import (
    DensityOperator,
    FockState,
    Mode,
    MomentOrder,
    apply_annihilation,
    apply_creation,
    apply_inverse_annihilation_x,
    apply_vacuum_projector,
    basis_index,
    basis_occupations,
    density_from_pure,
    directional_moment,
    make_pure_state,
    mix,
    normally_ordered_moment,
    vacuum_state,
)
from .poincare import (
    PolarizationVector,
    RotatedFockVector,
    fock_basis_change,
    orthogonal_vector,
    rotated_fock_vector,
    stokes_parameters,
    transform_annihilation_coefficients,
)
from .specfile import dump_fock_state, load_state_spec, parse_state_spec, save_fock_state
from .states import (
    Family,
    StateFamily,
    UnpolarizedWeights,
    biphoton_qutrit,
    coherent_state,
    hidden_polarized,
    min_cutoff_geometric,
    min_cutoff_poisson,
    phase_randomized_coherent,
    scale_intensity,
    thermal_product,
    unpolarized,
)
