"""Error hierarchy shared by every recalibration module.

Errors split into two families that map onto the command-line exit codes:
input problems (exit 2) and numeric or convergence problems (exit 3).
"""


class RecalError(Exception):
    """Base class for every error raised by the recalibration apps."""

    exit_code = 1


class InputError(RecalError, ValueError):
    exit_code = 2


class NumericError(RecalError, ArithmeticError):
    exit_code = 3


class ParameterDomainError(InputError):
    """Distribution or model parameters outside their domain."""


class InsufficientDataError(InputError):
    pass


class DegenerateDesignError(InputError):
    """The predictor has no spread (all ensemble means identical)."""


class EmptyResultError(InputError):
    pass


class DatasetError(InputError):
    """A dataset file could not be parsed.

    Attributes:
        line (int | None): 1-based line number in the file, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateVarianceError(NumericError):
    """A predictive distribution would have non-positive variance."""


class BootstrapFailureError(NumericError):
    pass


class UndefinedScoreError(NumericError):
    pass


class QuadratureError(NumericError):
    pass
