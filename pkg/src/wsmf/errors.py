"""Exception hierarchy.

Three broad families map onto CLI exit codes: configuration/input problems
(exit 2), numerical/analysis failures (exit 3) and file I/O trouble (exit 4).
"""


class WsmfError(Exception):
    """Base class for all package errors."""


class ValidationError(WsmfError):
    """Bad parameters or malformed input (exit code 2)."""


class ComputeError(WsmfError):
    """A numerical step could not be carried out (exit code 3)."""


class ReportIoError(WsmfError):
    """Reading or writing files failed (exit code 4)."""


# --- wavelet ---------------------------------------------------------------

class SignalTooShort(ValidationError):
    pass


class NonFiniteInput(ValidationError):
    pass


# --- multiscale ------------------------------------------------------------

class InsufficientScales(ComputeError):
    pass


class NonPositiveP(ValidationError):
    pass


# --- scaling ---------------------------------------------------------------

class EmptyField(ComputeError):
    pass


class NegativeMomentOnCoefficients(ValidationError):
    pass


class AllZeroAtNegativeQ(ComputeError):
    pass


class ScaleRangeTooNarrow(ValidationError):
    pass


class AllZeroLevel(ComputeError):
    pass


class GridLacksSmallPositiveQ(ValidationError):
    pass


# --- spectrum --------------------------------------------------------------

class IncompatibleQRestriction(ValidationError):
    pass


class DegenerateHistogram(ComputeError):
    pass


class UnsupportedModel(ValidationError):
    pass


# --- sparsity --------------------------------------------------------------

class NonPositiveParams(ValidationError):
    pass


class DeltaOutOfRange(ValidationError):
    pass


# --- synth -----------------------------------------------------------------

class EmbeddingNotPSD(ComputeError):
    pass


class LawViolatesUniformBound(ValidationError):
    pass


class ParamOutOfRange(ValidationError):
    pass


# --- io --------------------------------------------------------------------

class ParseError(ValidationError):
    pass


class ChannelOutOfRange(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class IoError(ReportIoError):
    pass
