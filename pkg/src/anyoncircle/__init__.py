"""Anyon fields on the covering of the circle in a truncated Fock space.

The package builds localized anyon field operators out of shift implementers
and exponentiated currents and measures their exchange phases on
truncation-safe probes.  Verifiers cover the spin-statistics relations
and rotation covariance on the circle and the cone-localized tensor
construction on the plane.
"""

from .anyon import (
    AnyonField,
    AnyonSpec,
    CommutationReport,
    ExchangeContext,
    PairingResult,
    SpinRecurrenceReport,
    aux_predicted_phase,
    blip_multiplier,
    build_field,
    predicted_phase,
    rotation_rep,
    rotation_sector_scalar,
    verify_aux_commutation,
    verify_commutation,
    verify_spin_recurrence,
)
from .blip import BlipFunction, Mollifier, blip, blip_derivative, standard_mollifier
from .covering import (
    TWO_PI,
    CoveringInterval,
    CoveringPoint,
    fractional_part,
    project,
    projections_disjoint,
    relative_winding,
    winding_number,
)
from .errors import (
    AnyonCircleError,
    ConvergenceFailure,
    DegenerateGeometry,
    EpsilonOutOfRange,
    GridTooCoarse,
    IllConditioned,
    NoSignificantEntries,
    NotDiagonal,
    NotHermitian,
    OverlapError,
    PseudoInverseFailure,
    SectorEmpty,
    SeparationViolation,
    UnknownTransformedFunction,
    WindowMismatch,
    WindowTooSmall,
    WrongClass,
)
from .fock import (
    FockBasis,
    FockOperator,
    car_operators,
    charge_operator,
    conjugate_blocks,
    ec_route_implementer,
    free_field,
    gamma_multiplicative,
    implementer_exp,
    implementer_shift,
    measure_exchange_phase,
    phase_from_elements,
    probe_matrix,
    second_quantize_diagonal,
    pattern_probes,
    truncation_safe_probes,
)
from .cones import (
    EuclideanMotion,
    GeneralizedCone,
    TensorField,
    TestFunctionSpace,
    cones_disjoint,
    cones_overlap_sampled,
    direction_vector,
    fermi_exchange_elements,
    fermi_field,
    polygons_disjoint,
    rep_e2,
    tensor_exchange_from_parts,
    tensor_field,
    transformed_label,
)
from .modes import (
    ModeWindow,
    OneParticleOperator,
    PeriodicFunction,
    fredholm_index,
    hs_offdiag_norm_sq,
    multiplication_operator,
    rotate_one_particle,
    sawtooth_coefficients,
    shift_operator,
    windowed_mode_sum,
)
from .schwinger import (
    SchwingerResult,
    schwinger_blip_closed_form,
    schwinger_quadrature,
    schwinger_trace,
)
from .sector import SectorEngine, SectorMatrixCache, chebyshev_expi_apply, subset_sum_bounds

__all__ = [
    "TWO_PI",
    "AnyonCircleError",
    "AnyonField",
    "AnyonSpec",
    "BlipFunction",
    "CommutationReport",
    "ConvergenceFailure",
    "CoveringInterval",
    "CoveringPoint",
    "DegenerateGeometry",
    "EpsilonOutOfRange",
    "EuclideanMotion",
    "ExchangeContext",
    "FockBasis",
    "FockOperator",
    "GeneralizedCone",
    "GridTooCoarse",
    "IllConditioned",
    "ModeWindow",
    "Mollifier",
    "NoSignificantEntries",
    "NotDiagonal",
    "NotHermitian",
    "OneParticleOperator",
    "OverlapError",
    "PairingResult",
    "PeriodicFunction",
    "PseudoInverseFailure",
    "SchwingerResult",
    "SectorEmpty",
    "SectorEngine",
    "SectorMatrixCache",
    "SeparationViolation",
    "SpinRecurrenceReport",
    "TensorField",
    "TestFunctionSpace",
    "UnknownTransformedFunction",
    "WindowMismatch",
    "WindowTooSmall",
    "WrongClass",
    "aux_predicted_phase",
    "blip",
    "blip_derivative",
    "blip_multiplier",
    "build_field",
    "car_operators",
    "charge_operator",
    "chebyshev_expi_apply",
    "cones_disjoint",
    "cones_overlap_sampled",
    "conjugate_blocks",
    "direction_vector",
    "ec_route_implementer",
    "fermi_exchange_elements",
    "fermi_field",
    "fractional_part",
    "fredholm_index",
    "free_field",
    "gamma_multiplicative",
    "hs_offdiag_norm_sq",
    "implementer_exp",
    "implementer_shift",
    "measure_exchange_phase",
    "multiplication_operator",
    "phase_from_elements",
    "polygons_disjoint",
    "predicted_phase",
    "probe_matrix",
    "project",
    "projections_disjoint",
    "relative_winding",
    "rep_e2",
    "rotate_one_particle",
    "rotation_rep",
    "rotation_sector_scalar",
    "sawtooth_coefficients",
    "schwinger_blip_closed_form",
    "schwinger_quadrature",
    "schwinger_trace",
    "second_quantize_diagonal",
    "shift_operator",
    "standard_mollifier",
    "subset_sum_bounds",
    "tensor_exchange_from_parts",
    "tensor_field",
    "transformed_label",
    "pattern_probes",
    "truncation_safe_probes",
    "verify_aux_commutation",
    "verify_commutation",
    "verify_spin_recurrence",
    "windowed_mode_sum",
    "winding_number",
]
