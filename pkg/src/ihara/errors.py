"""Exception hierarchy shared by every module."""

from __future__ import annotations


class IharaError(Exception):
    """Base class for all errors raised by this package."""


# -- graph input ---------------------------------------------------------

class GraphValidationError(IharaError, ValueError):
    """Raw graph data violates a structural invariant."""


class SelfLoop(GraphValidationError):
    pass


class DuplicateEdge(GraphValidationError):
    pass


class AsymmetricEdge(GraphValidationError):
    pass


class EmptyGraph(GraphValidationError):
    pass


class GraphFormatError(IharaError, ValueError):
    """Malformed graph file. Carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# -- group actions and windows ----------------------------------------------

class NotFree(IharaError, ValueError):
    """A non-identity group element fixes a vertex."""


class NotAnAutomorphism(IharaError, ValueError):
    pass


class ActionMismatch(IharaError, ValueError):
    """Operands belong to different action contexts."""


class RadiusTooSmall(IharaError, ValueError):
    pass


class WindowTooSmall(IharaError, ValueError):
    pass


# -- analysis ---------------------------------------------------------------

class DomainError(IharaError, ValueError):
    """Evaluation point outside the region where a formula is valid."""


class BadConstantTerm(IharaError, ValueError):
    pass


class HullContainsZero(IharaError, ValueError):
    """0 lies in (or within tolerance of) the convex hull of a spectrum."""


class BranchObstruction(IharaError, ValueError):
    """No single logarithm branch is admissible for the requested evaluation."""


class QuadratureNotConverged(IharaError, RuntimeError):
    pass


class TruncationNotConverged(IharaError, RuntimeError):
    pass


class OutsideOmega(IharaError, ValueError):
    """Point lies on the removed circle or real segments of the regular-graph domain."""


class IdentityViolation(IharaError, AssertionError):
    """Two routes to the same quantity disagree."""
