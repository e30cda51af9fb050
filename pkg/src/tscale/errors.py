"""Exception types shared across the package."""


class TscaleError(Exception):
    """Base class for all library errors."""


class DomainError(TscaleError):
    """A time value is not a member of the time scale, or a range is invalid."""


class KappaError(TscaleError):
    """The point is the left-scattered maximum, outside the differentiation domain."""


class ToleranceError(TscaleError):
    """A tolerance-driven computation failed to converge or lost containment."""


class SingularError(TscaleError):
    """A scalar map was evaluated at, or within guard distance of, a singularity."""


class RegressivityError(TscaleError):
    """A coefficient violates the regressivity condition required by an operation."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class GridError(TscaleError):
    """A required sample point is missing from a grid."""


class ConstantGraininessError(TscaleError):
    """The operation requires a time scale with constant graininess."""


class ParseError(TscaleError):
    """Scale-spec text could not be parsed; carries the source position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class OverlapError(TscaleError):
    """Scale components intersect or duplicate each other."""
