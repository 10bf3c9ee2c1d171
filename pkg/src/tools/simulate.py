"""Gaussian stationary sample paths by circulant embedding, and trend contamination."""
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..utils.errors import DomainError, EmbeddingNotPSDError, UsageError
from .spectral_models import SpectralModel, covariance
from .trend import TrendSpec, trend_path

logger = logging.getLogger(__name__)

MIN_POINTS = 64
PSD_RELATIVE_TOL = 1e-8
MAX_EMBEDDING_DOUBLINGS = 3


class PathLabel(str, Enum):
    CLEAN = "CLEAN"
    CONTAMINATED = "CONTAMINATED"


@dataclass(frozen=True)
class SamplingGrid:
    """Observation window [0, T) sampled at t_k = k * T / n, k = 0..n-1."""

    T: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise DomainError(f"horizon T must be positive and finite, got {self.T}")
        n = int(self.n)
        if n != self.n or n < MIN_POINTS or n & (n - 1):
            raise DomainError(f"point count n must be a power of two >= {MIN_POINTS}, got {self.n}")

    @property
    def delta(self) -> float:
        return self.T / self.n

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.delta


@dataclass(frozen=True, eq=False)
class SampledPath:
    grid: SamplingGrid
    values: np.ndarray
    label: PathLabel = PathLabel.CLEAN
    seed: int = 0
    trend: Optional[TrendSpec] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise DomainError(f"path has shape {values.shape}, grid expects ({self.grid.n},)")
        if not np.all(np.isfinite(values)):
            raise DomainError("path values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "label", PathLabel(self.label))


def replication_seed(base_seed: int, index: int) -> int:
    """Independent per-replication seed derived from (base_seed, index)."""
    state = np.random.SeedSequence([int(base_seed), int(index)]).generate_state(1, np.uint64)
    return int(state[0])


# ========================================================================
# CIRCULANT EMBEDDING
# ========================================================================

def _embedding_eigenvalues(model: SpectralModel, grid: SamplingGrid) -> np.ndarray:
    size = 2 * grid.n
    for attempt in range(MAX_EMBEDDING_DOUBLINGS + 1):
        half = size // 2
        lags = np.arange(half + 1) * grid.delta
        r = np.asarray(covariance(model, lags), dtype=float)
        first_row = np.concatenate([r, r[-2:0:-1]])
        eigenvalues = np.fft.fft(first_row).real

        smallest = float(eigenvalues.min())
        if smallest >= -PSD_RELATIVE_TOL * float(eigenvalues.max()):
            if attempt:
                logger.debug("circulant embedding accepted at size %d", size)
            return np.clip(eigenvalues, 0.0, None)

        logger.debug("embedding size %d has min eigenvalue %.3e", size, smallest)
        size *= 2
    raise EmbeddingNotPSDError(smallest, size // 2)


def sample_gaussian_path(model: SpectralModel, grid: SamplingGrid, seed: int) -> SampledPath:
    """
    Draw one realization of the centered stationary Gaussian process on a grid.

    The Toeplitz covariance [r((j - k) delta)] is embedded in a circulant of
    size 2n, doubled up to three times if the embedding is not nonnegative
    definite. The path is fully determined by (model, grid, seed).

    Args:
        model: Spectral model supplying r(t)
        grid: Sampling grid
        seed: Unsigned integer seed for numpy's default generator

    Returns:
        A CLEAN SampledPath

    Raises:
        EmbeddingNotPSDError: If the largest embedding still has eigenvalues
            below -1e-8 times the largest one
    """
    if seed < 0:
        raise DomainError(f"seed must be unsigned, got {seed}")
    eigenvalues = _embedding_eigenvalues(model, grid)
    size = eigenvalues.size

    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    values = np.fft.fft(np.sqrt(eigenvalues / size) * noise).real[: grid.n]
    return SampledPath(grid=grid, values=values, label=PathLabel.CLEAN, seed=seed)


# ========================================================================
# CONTAMINATION
# ========================================================================

def contaminate(path: SampledPath, trend: TrendSpec) -> SampledPath:
    """
    Add the trend to a clean path: X(t_k) = Y(t_k) + M(t_k).

    Raises:
        UsageError: If the path is already contaminated
    """
    if path.label is PathLabel.CONTAMINATED:
        raise UsageError("path is already CONTAMINATED; contaminate a CLEAN path")
    values = path.values + trend_path(trend, path.grid.times)
    return SampledPath(grid=path.grid, values=values, label=PathLabel.CONTAMINATED,
                       seed=path.seed, trend=trend)


def subtract_trend(path: SampledPath, trend: TrendSpec) -> SampledPath:
    """Inverse of contaminate()."""
    if path.label is not PathLabel.CONTAMINATED:
        raise UsageError("path is CLEAN; nothing to subtract")
    values = path.values - trend_path(trend, path.grid.times)
    return SampledPath(grid=path.grid, values=values, label=PathLabel.CLEAN, seed=path.seed)


def export_path_csv(path: SampledPath, file: Union[str, Path]) -> Path:
    """Write the path as two-column CSV (t, value)."""
    target = Path(file)
    table = np.column_stack([path.grid.times, path.values])
    np.savetxt(target, table, delimiter=",", header="t,value", comments="", fmt="%.17g")
    return target
