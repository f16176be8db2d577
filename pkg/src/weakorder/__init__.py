"""Weak values from correlations between two successive measurement pointers.

A system observable and a projector are coupled, one after the other, to two
Gaussian pointers. Correlations between the pointer readouts recover the real
and imaginary parts of the weak value in the weak-coupling limit, in either
coupling order, and a phase-space Monte Carlo mirrors the same structure for
classical ensembles.
"""

from .classical import (
    ClassicalEnsemble,
    ClassicalModel,
    ClassicalObservable,
    ClassicalRhs,
    GaussianDensity,
    MCResult,
    OBS_HARMONIC,
    OBS_P,
    OBS_Q,
    OBS_QP,
    classical_correlation_mc,
    classical_rhs,
    kick,
    matched_pointer_density,
    phase_space_mean,
    poisson_bracket,
    sample_ensemble,
)
from .config import (
    CONFIG_SCHEMA,
    EXAMPLE_CONFIGS,
    ExperimentConfig,
    example_config,
    validate_config,
)
from .errors import (
    BackendUnsupported,
    ConfigInvalid,
    DecompositionFailure,
    DegenerateSchedule,
    DimensionMismatch,
    FlowDivergence,
    GridUnderResolved,
    IllConditionedFit,
    ImaginaryResidualTooLarge,
    NonHermitianInput,
    OracleTooLarge,
    PostSelectionTooRare,
    QuadratureUnsupported,
    TranslationOutOfRange,
    WeakOrderError,
)
from .estimators import (
    CorrelationResult,
    EstimatorResult,
    WeakLimitRhs,
    WeakValue,
    extrapolate_limit,
    forward_estimator,
    reverse_estimator,
    strong_coupling_asymmetry,
    weak_limit_rhs,
    weak_value,
)
from .operators import (
    DensityMatrix,
    Observable,
    Projector,
    spectral_decompose,
)
from .pointer import (
    GridSpec,
    PointerConditionReport,
    PointerObservable,
    PointerState,
    check_pointer_conditions,
    make_gaussian_pointer,
    moment,
    overlap_kernel,
    symmetry_condition_values,
)
from .sequential import (
    MeasurementSetup,
    correlation,
    expectation,
    full_state_oracle,
    oracle_correlation,
    pointer1_mean,
    pointer2_mean,
    projective_coupling,
)

__version__ = "0.1.0"

__all__ = [
    "BackendUnsupported",
    "CONFIG_SCHEMA",
    "ClassicalEnsemble",
    "ClassicalModel",
    "ClassicalObservable",
    "ClassicalRhs",
    "ConfigInvalid",
    "CorrelationResult",
    "DecompositionFailure",
    "DegenerateSchedule",
    "DensityMatrix",
    "DimensionMismatch",
    "EXAMPLE_CONFIGS",
    "EstimatorResult",
    "ExperimentConfig",
    "FlowDivergence",
    "GaussianDensity",
    "GridSpec",
    "GridUnderResolved",
    "IllConditionedFit",
    "ImaginaryResidualTooLarge",
    "MCResult",
    "MeasurementSetup",
    "NonHermitianInput",
    "OBS_HARMONIC",
    "OBS_P",
    "OBS_Q",
    "OBS_QP",
    "Observable",
    "OracleTooLarge",
    "PointerConditionReport",
    "PointerObservable",
    "PointerState",
    "PostSelectionTooRare",
    "Projector",
    "QuadratureUnsupported",
    "TranslationOutOfRange",
    "WeakLimitRhs",
    "WeakOrderError",
    "WeakValue",
    "check_pointer_conditions",
    "classical_correlation_mc",
    "classical_rhs",
    "correlation",
    "example_config",
    "expectation",
    "extrapolate_limit",
    "forward_estimator",
    "full_state_oracle",
    "kick",
    "make_gaussian_pointer",
    "matched_pointer_density",
    "moment",
    "oracle_correlation",
    "overlap_kernel",
    "phase_space_mean",
    "pointer1_mean",
    "pointer2_mean",
    "poisson_bracket",
    "projective_coupling",
    "reverse_estimator",
    "sample_ensemble",
    "spectral_decompose",
    "strong_coupling_asymmetry",
    "symmetry_condition_values",
    "validate_config",
    "weak_limit_rhs",
    "weak_value",
]
