"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all numerical-geometry errors raised by modsym."""


class DomainError(GeometryError):
    """Input lies outside the mathematical domain of the operation
    (non positive definite matrix, singular matrix, zero vector, ...)."""


class ConditioningError(GeometryError):
    """Input is too ill-conditioned to be processed reliably
    (eigenvalue ratio beyond the supported range)."""


class RegularityError(GeometryError):
    """A segment or direction is too close to a singular direction
    (chamber-angle wall or eigenvalue tie) for the requested operation."""


class OppositionError(GeometryError):
    """Two flags are not in general position, so no joining flat exists."""


class ParityError(GeometryError):
    """A word with odd inversion count was passed where an
    orientation-preserving element is required."""


class PreconditionError(GeometryError):
    """A documented precondition of the operation does not hold."""


class DegenerateTriangleError(GeometryError):
    """The orbit triangle collapses to a point (global fixed point)."""


class ConvergenceError(GeometryError):
    """An iterative solver failed to reach its tolerance.

    Carries diagnostics: number of iterations and the final gradient norm.
    """

    def __init__(self, message, iterations=None, grad_norm=None):
        super().__init__(message)
        self.iterations = iterations
        self.grad_norm = grad_norm
