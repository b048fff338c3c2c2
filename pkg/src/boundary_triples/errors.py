"""Exception hierarchy shared by all submodules."""


class BoundaryTripleError(Exception):
    """Base class for every error raised by this package."""


class NotHermitianError(BoundaryTripleError, ValueError):
    pass


class DimensionError(BoundaryTripleError, ValueError):
    """Shapes or boundary dimensions do not agree."""


class SingularSystemError(BoundaryTripleError, ArithmeticError):
    pass


class ConvergenceError(BoundaryTripleError, ArithmeticError):
    pass


class DomainError(BoundaryTripleError, ValueError):
    """An argument lies outside the supported range."""


class PoleProximityError(BoundaryTripleError, ArithmeticError):
    """Spectral parameter too close to the Dirichlet spectrum."""

    def __init__(self, message, distance=None):
        super().__init__(message)
        self.distance = distance


class ScaleDegenerateError(BoundaryTripleError, ArithmeticError):
    """Imaginary part of the Weyl function is numerically singular."""

    def __init__(self, message, smallest=None, condition=None):
        super().__init__(message)
        self.smallest = smallest
        self.condition = condition


class RelationError(BoundaryTripleError, ValueError):
    pass


class ModelError(BoundaryTripleError, ValueError):
    """Invalid model configuration."""
