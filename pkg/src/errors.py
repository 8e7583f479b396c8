"""Error types raised by the geometry, perception and planning layers."""

from typing import Optional


class GuidanceError(Exception):
    """Base class for every error raised by track-guide."""


class InvalidInputError(GuidanceError, ValueError):
    """Arguments violate an operation's preconditions."""


class OutOfDomainError(GuidanceError, ValueError):
    """A parameter or arc length lies outside the curve's domain."""


class AmbiguousProjectionError(GuidanceError):
    """A point has several equidistant nearest points on a curve."""


class InsufficientPerceptionError(GuidanceError):
    """The observation does not contain enough boundary points to plan."""


class InfeasibleCorridorError(GuidanceError):
    """The corridor is too narrow (or too short) to hold a lattice."""


class NoFeasiblePathError(GuidanceError):
    """Every lattice path passes through an infinite-cost node."""


class ScenarioError(GuidanceError):
    """A scenario or frame file could not be loaded.

    Attributes:
        field: Dotted path of the offending field, when known
    """

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
