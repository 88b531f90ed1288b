"""Exception types raised across the package."""


class LinMTLError(Exception):
    """Base class for all package-specific errors."""


class RankDeficientError(LinMTLError):
    """The optimal predictors are (numerically) linearly dependent."""


class DegenerateWeightError(LinMTLError):
    """All weight mass sits on tasks with zero optimal predictors."""


class DivergedError(LinMTLError):
    """An iterative optimizer produced NaN or Inf."""


class TooManyTasksError(LinMTLError):
    """A 2^(k-1) enumeration was requested for k beyond the cap."""


class OutOfOrthantError(LinMTLError):
    """A point violates the non-negative orthant preconditions."""


class PatternMismatchError(LinMTLError):
    """The closed-form intersection formula does not apply to this matrix."""


class SingularGramError(LinMTLError):
    """The Gram matrix could not be factorized (pivot below tolerance)."""


class EmptyGradientsError(LinMTLError):
    """The min-norm subproblem received no gradients."""


class EmptyListError(LinMTLError):
    """A non-empty point list was required."""


class ParseError(LinMTLError):
    """A CSV cell failed to parse; carries row/column location."""

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class ConstantColumnError(LinMTLError):
    """Standardization would divide by a (near-)zero standard deviation."""
