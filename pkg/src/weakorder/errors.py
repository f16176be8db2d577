"""Exception hierarchy shared by all modules."""


class WeakOrderError(Exception):
    """Base class for every error raised by this package."""


class NonHermitianInput(WeakOrderError):
    """A matrix that must be Hermitian deviates beyond tolerance."""


class DecompositionFailure(WeakOrderError):
    """The symmetric eigensolver failed to converge."""


class DimensionMismatch(WeakOrderError):
    """Operands live on incompatible spaces."""


class GridUnderResolved(WeakOrderError):
    """Grid spacing or extent cannot resolve the requested Gaussian."""


class BackendUnsupported(WeakOrderError):
    """The analytic pointer backend has no closed form for the request."""


class TranslationOutOfRange(WeakOrderError):
    """A pointer translation would wrap around the periodic grid."""


class ImaginaryResidualTooLarge(WeakOrderError):
    """A quantity that must be real acquired a large imaginary part."""


class OracleTooLarge(WeakOrderError):
    """The full tensor-product state exceeds the oracle size cap."""


class PostSelectionTooRare(WeakOrderError):
    """The post-selection probability is below the ratio floor."""


class DegenerateSchedule(WeakOrderError):
    """The coupling schedule for extrapolation has repeated entries."""


class IllConditionedFit(WeakOrderError):
    """The extrapolation design matrix is numerically singular."""


class FlowDivergence(WeakOrderError):
    """A classical trajectory left the trusted region of phase space."""


class QuadratureUnsupported(WeakOrderError):
    """Closed-form phase-space averages need Gaussian densities."""


class ConfigInvalid(WeakOrderError):
    """An experiment configuration failed validation."""
