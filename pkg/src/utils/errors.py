"""Exception types raised across the lab.

Domain and usage errors map to CLI exit status 2, numerical errors to 3.
"""
from typing import Optional


class LabError(Exception):
    """Base class for every error raised deliberately by the lab."""


class DomainError(LabError, ValueError):
    """A parameter or argument lies outside the domain of an operation."""


class UsageError(LabError, ValueError):
    """An operation was called in a state that does not allow it."""


class NumericalError(LabError, RuntimeError):
    """A numerical procedure did not reach its target accuracy.

    Args:
        message: Human readable description
        achieved_tolerance: Error estimate actually reached, when known
    """

    def __init__(self, message: str, achieved_tolerance: Optional[float] = None):
        super().__init__(message)
        self.achieved_tolerance = achieved_tolerance


class EmbeddingNotPSDError(NumericalError):
    """Circulant embedding of a covariance sequence is not nonnegative definite."""

    def __init__(self, min_eigenvalue: float, embedding_size: int):
        super().__init__(
            f"EMBEDDING_NOT_PSD: minimum eigenvalue {min_eigenvalue:.3e} "
            f"for embedding size {embedding_size}"
        )
        self.min_eigenvalue = min_eigenvalue
        self.embedding_size = embedding_size
