"""Exception types shared across the package."""


class SpecBoundsError(Exception):
    """Base class for all package errors."""


class ParameterError(SpecBoundsError, ValueError):
    """An argument is outside its admissible range."""


class DomainError(SpecBoundsError, ValueError):
    """A point lies outside the domain of a map or analytic function."""


class BranchCutError(DomainError):
    """A point lies on (or numerically at) the branch cut of an inverse map."""


class InfinitySignal(DomainError):
    """A map is evaluated at its pole; the value is the point at infinity."""


class ConfigurationError(SpecBoundsError, KeyError):
    """A required configuration entry is missing."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ContourError(SpecBoundsError):
    """A quadrature contour passes too close to a zero or an eigenvalue."""


class ConvergenceError(SpecBoundsError):
    """An iterative method failed; ``state`` carries whatever was computed."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class SubdivisionError(SpecBoundsError):
    """Winding counts of a box and its children are inconsistent."""

    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box


class InconsistencyError(SpecBoundsError):
    """Two independent pipelines disagree."""

    def __init__(self, message, first=None, second=None):
        super().__init__(message)
        self.first = first
        self.second = second


class SingularTermError(SpecBoundsError, ValueError):
    """A moment weight is evaluated exactly at one of its singularities."""
