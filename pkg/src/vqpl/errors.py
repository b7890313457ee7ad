"""Exception hierarchy shared across the package.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented process exit codes: 1 for usage errors, 2 for data errors,
3 for numeric errors.
"""


class VqplError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class UsageError(VqplError):
    """Bad command-line arguments or configuration."""

    exit_code = 1


class DataError(VqplError):
    """Invalid or malformed input data."""

    exit_code = 2


class NumericError(VqplError):
    """Non-finite value produced where finite math was required."""

    exit_code = 3


# -- geometry ---------------------------------------------------------------

class TooShort(DataError):
    """Chain has too few residues for the requested operation."""


class DegenerateGeometry(DataError):
    """Coincident or collinear consecutive points; angles are undefined."""


class InvalidAngle(DataError):
    """Angle triple outside its valid range (r <= 0 or alpha not in (0, pi))."""


class ShapeMismatch(DataError):
    """Array arguments have incompatible shapes or lengths."""


# -- ingest -----------------------------------------------------------------

class NoBackbone(DataError):
    """Structure file yielded fewer than four CA atoms."""


class MalformedRecord(DataError):
    """Every candidate ATOM record in the input failed to parse."""


class BadRatios(DataError):
    """Split ratios are non-positive or do not sum to 1 (or 100)."""


# -- autodiff ---------------------------------------------------------------

class NotScalar(DataError):
    """backward() requires a scalar loss tensor."""


# -- transformer ------------------------------------------------------------

class LengthMismatch(ShapeMismatch):
    """Sequence and structure inputs disagree in length."""


class OddHeadDim(DataError):
    """Rotary embedding requires an even per-head dimension."""


class TooLong(DataError):
    """Input exceeds the configured maximum sequence length."""


# -- quantizer --------------------------------------------------------------

class EmptyCodebook(DataError):
    """Codebook has no entries."""


class BatchTooSmall(DataError):
    """Fewer embeddings than the top-k neighbourhood size."""


class NonPositiveTemperature(DataError):
    """Soft quantization requires temperature > 0."""


class BadStep(DataError):
    """Step index outside [0, total_steps]."""


class NotNormalized(DataError):
    """Probability row does not sum to one."""


# -- inpainting -------------------------------------------------------------

class BadSpan(DataError):
    """Span does not fit inside the token sequence."""


# -- cli --------------------------------------------------------------------

class UnknownCode(DataError):
    """Token id outside the codebook."""


# -- warnings ---------------------------------------------------------------

class MalformedRecordWarning(UserWarning):
    """A single ATOM record was skipped during parsing."""


class DegenerateConfigurationWarning(UserWarning):
    """Superposition optimum is non-unique (rank-deficient covariance)."""
