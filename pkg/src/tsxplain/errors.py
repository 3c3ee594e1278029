"""Exception hierarchy shared by all tsxplain modules.

Two bases matter for the CLI exit-code contract: ``ValidationError``
(bad inputs, exit code 2) and ``NumericError`` (a computation that could
not be completed on otherwise well-formed inputs, exit code 3).
"""


class TsxplainError(Exception):
    """Base class for all library errors."""


class ValidationError(TsxplainError, ValueError):
    """Input failed a precondition."""


class NumericError(TsxplainError, RuntimeError):
    """A numeric procedure failed or cannot be defined on the data."""


# --- time series ingestion / reshaping ---

class MissingPeriod(ValidationError):
    """Gap in the monthly index."""


class DuplicatePeriod(ValidationError):
    pass


class NonNumericCell(ValidationError):
    pass


class UnknownTarget(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class UndefinedMean(ValidationError):
    """Mean reducer applied to a month with no events."""


class UnknownColumn(ValidationError):
    pass


class LagTooLarge(ValidationError):
    pass


class EmptySplit(ValidationError):
    pass


class UnknownPeriod(ValidationError):
    pass


# --- numerics, shared ---

class DimensionMismatch(ValidationError):
    pass


class TooFewRows(ValidationError):
    pass


class NonFinite(NumericError):
    pass


class NoConvergence(NumericError):
    """Solver hit the iteration cap.

    ``max_violation`` carries the worst remaining optimality violation so
    callers can report how far from converged the run ended.
    """

    def __init__(self, message, max_violation=None):
        super().__init__(message)
        self.max_violation = max_violation


# --- explainers ---

class SingularFit(NumericError):
    pass


class TooManyFeatures(ValidationError):
    pass


class EmptyBackground(ValidationError):
    pass


# --- scoring / statistics ---

class ZeroTruth(NumericError):
    """MAPE is undefined when a true value is 0."""


class EmptyTable(ValidationError):
    pass


class TooFewSamples(ValidationError):
    pass


class ZeroVariance(ValidationError):
    pass


class ConstantInput(ValidationError):
    pass


class InvalidSummary(ValidationError):
    pass


class InvalidDf(ValidationError):
    pass


# --- CLI ---

class InvalidArgs(ValidationError):
    pass
