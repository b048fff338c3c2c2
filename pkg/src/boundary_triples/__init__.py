"""Quasi boundary triples, their regularization to ordinary triples, and
the extensions they parameterize, with concrete Laplacian models."""

from . import extensions, models, numerics, relations, triple_core
from .errors import (
    BoundaryTripleError,
    ConvergenceError,
    DimensionError,
    DomainError,
    ModelError,
    NotHermitianError,
    PoleProximityError,
    RelationError,
    ScaleDegenerateError,
    SingularSystemError,
)

__all__ = [
    "extensions",
    "models",
    "numerics",
    "relations",
    "triple_core",
    "BoundaryTripleError",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "ModelError",
    "NotHermitianError",
    "PoleProximityError",
    "RelationError",
    "ScaleDegenerateError",
    "SingularSystemError",
]
