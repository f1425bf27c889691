"""Exception hierarchy shared by the solver library, the CLI and the API."""
from __future__ import annotations


class FpmError(Exception):
    """Base class for every error raised by the solver."""


class GeometryError(FpmError):
    pass


class ApproximationError(FpmError):
    pass


class ConfigurationError(FpmError, ValueError):
    pass


class SolverError(FpmError):
    pass


# geometry
class DuplicatePoints(GeometryError):
    pass


class PointOutsideDomain(GeometryError):
    pass


class DegenerateCell(GeometryError):
    pass


class EmptyDomain(GeometryError):
    pass


class InsufficientSupport(GeometryError):
    pass


class CrackMissesFaces(GeometryError):
    pass


class UnsupportedElementType(GeometryError):
    pass


class ParseError(ConfigurationError):
    def __init__(self, message: str, *, line: int | None = None, column: int | None = None) -> None:
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + location)
        self.line = line
        self.column = column


# approximation
class DegenerateAxis(ApproximationError):
    pass


class SingularBasis(ApproximationError):
    pass


class RankDeficientSupport(ApproximationError):
    pass


# materials / configuration
class UnknownPreset(ConfigurationError):
    pass


class UnknownCase(ConfigurationError):
    pass


class NonPositivePenalty(ConfigurationError):
    pass


class SourcePointInsideDomain(ConfigurationError):
    pass


# assembly / solve
class MissingOperator(SolverError):
    pass


class NormalizationSingular(SolverError):
    pass


class SingularSystem(SolverError):
    pass


class FactorizationFailure(SolverError):
    pass


class NoExactSolution(FpmError):
    pass


class ExportError(FpmError, OSError):
    pass
