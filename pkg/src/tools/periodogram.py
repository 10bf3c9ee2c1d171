"""Continuous periodogram and smoothed spectral functionals.

The periodogram of a sampled path is

    I_T(lam) = |delta * sum_k exp(i lam t_k) x_k|^2 / (2 pi T)

on the FFT grid lam_j = 2 pi j / (pad * T), j = -pad*n/2 .. pad*n/2.
"""
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from ..utils.errors import DomainError
from ..utils.quadrature import even_integral_to_infinity
from ..utils.toeplitz import SymmetricToeplitz, trapezoid_weights
from .kernels import SmoothingKernel, SpectralWeight, kernel_fourier
from .simulate import SampledPath, SamplingGrid
from .spectral_models import SpectralModel, eval_density

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True, eq=False)
class Periodogram:
    """Ordinates on the symmetric grid j = -N/2..N/2 with N = pad * n."""

    frequencies: np.ndarray
    ordinates: np.ndarray
    grid: SamplingGrid
    pad: int = 1

    @property
    def step(self) -> float:
        return 2.0 * math.pi / (self.pad * self.grid.T)

    @property
    def nyquist(self) -> float:
        return math.pi / self.grid.delta

    @property
    def zero_index(self) -> int:
        return self.frequencies.size // 2

    def weights(self) -> np.ndarray:
        """Trapezoid weights over [-nyquist, nyquist]."""
        return trapezoid_weights(self.frequencies.size, self.step)

    def scaled(self, factor: float) -> "Periodogram":
        return Periodogram(self.frequencies, factor * self.ordinates, self.grid, self.pad)


def _frequency_grid(grid: SamplingGrid, pad: int) -> np.ndarray:
    if int(pad) != pad or pad < 1:
        raise DomainError(f"pad must be a positive integer, got {pad}")
    half = pad * grid.n // 2
    return 2.0 * math.pi * np.arange(-half, half + 1) / (pad * grid.T)


def _mirror(half_spectrum: np.ndarray) -> np.ndarray:
    return np.concatenate([half_spectrum[:0:-1], half_spectrum])


def compute_periodogram(path: SampledPath, pad: int = 1) -> Periodogram:
    """
    Compute I_T on the FFT grid.

    Args:
        path: The sampled path
        pad: Zero-padding factor; pad = 2 gives a grid on which the
            trapezoid rule reproduces the time-domain quadratic form
            without wrap-around

    Returns:
        Periodogram with exactly even, nonnegative ordinates
    """
    grid = path.grid
    frequencies = _frequency_grid(grid, pad)
    transform = np.fft.rfft(path.values, n=pad * grid.n)
    half = grid.delta ** 2 * np.abs(transform) ** 2 / (2.0 * math.pi * grid.T)
    return Periodogram(frequencies, _mirror(half), grid, int(pad))


def periodogram_at(path: SampledPath, lam: ArrayLike) -> ArrayLike:
    """Direct-summation periodogram at arbitrary frequencies (slow reference)."""
    scalar = np.ndim(lam) == 0
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    grid = path.grid
    phases = np.exp(1j * np.outer(lam, grid.times))
    sums = grid.delta * phases @ path.values
    values = np.abs(sums) ** 2 / (2.0 * math.pi * grid.T)
    return float(values[0]) if scalar else values


def synthetic_periodogram(model: SpectralModel, grid: SamplingGrid, pad: int = 1) -> Periodogram:
    """Noise-free periodogram with ordinates f(lam_j); the zero bin is 0 when f has a pole."""
    frequencies = _frequency_grid(grid, pad)
    ordinates = np.zeros_like(frequencies)
    nonzero = frequencies != 0.0
    ordinates[nonzero] = eval_density(model, frequencies[nonzero])
    if not model.singular_at_origin:
        ordinates[~nonzero] = eval_density(model, 0.0)
    return Periodogram(frequencies, ordinates, grid, int(pad))


# ========================================================================
# FUNCTIONALS
# ========================================================================

def weight_on_grid(pg: Periodogram, weight: SpectralWeight) -> np.ndarray:
    """g on the periodogram grid, with the zero bin set to 0 when g has a pole there."""
    values = np.zeros_like(pg.frequencies)
    mask = np.ones(pg.frequencies.size, dtype=bool)
    if weight.singular_at_origin:
        mask[pg.zero_index] = False
    values[mask] = weight.density(pg.frequencies[mask])
    return values


def smoothed_functional(pg: Periodogram, kernel: SpectralWeight) -> float:
    """
    Trapezoid approximation of the integral of g(lam) I_T(lam) over [-nyquist, nyquist].

    Args:
        pg: Periodogram
        kernel: Smoothing kernel, or any weight exposing ``density``

    Returns:
        The functional value
    """
    return float(np.sum(pg.weights() * weight_on_grid(pg, kernel) * pg.ordinates))


def quadratic_form_functional(path: SampledPath, kernel: SmoothingKernel) -> float:
    """
    Time-domain form (delta^2 / T) sum_jk x_j x_k a(t_j - t_k) via circulant FFT.

    Equals the integral of g I_T over the whole real line.
    """
    grid = path.grid
    lags = np.arange(grid.n) * grid.delta
    toeplitz = SymmetricToeplitz(kernel_fourier(kernel, lags))
    return grid.delta ** 2 * toeplitz.quadratic_form(path.values) / grid.T


def spectral_functional_limit(model: SpectralModel, kernel: SpectralWeight,
                              rel_tol: float = 1e-6) -> float:
    """Integral of g f over the real line, the law-of-large-numbers limit of the smoothed functional."""
    def integrand(x):
        return float(kernel.density(x)) * float(eval_density(model, x))

    return even_integral_to_infinity(integrand, rel_tol=rel_tol, tail_tol=1e-10,
                                     what="spectral functional limit")


def export_periodogram_csv(pg: Periodogram, file: Union[str, Path]) -> Path:
    """Write the periodogram as two-column CSV (lambda, I)."""
    target = Path(file)
    table = np.column_stack([pg.frequencies, pg.ordinates])
    np.savetxt(target, table, delimiter=",", header="lambda,I", comments="", fmt="%.17g")
    return target
