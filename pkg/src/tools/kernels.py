"""Smoothing kernels g(lam) and their transforms a(t).

Convention: a(t) = (1/2pi) * integral of exp(i lam t) g(lam) dlam, so that
the frequency functional of a periodogram equals the time-domain Toeplitz
quadratic form with a(t - s).
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Protocol, Sequence, Union

import numpy as np
from scipy import special

from ..utils.errors import DomainError, NumericalError
from .spectral_models import EXPONENTIAL

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class SpectralWeight(Protocol):
    """Anything with an even weight g(lam) that a frequency functional can integrate."""

    def density(self, lam: ArrayLike) -> ArrayLike:
        ...

    @property
    def singular_at_origin(self) -> bool:
        ...


class KernelForm(str, Enum):
    POISSON = "poisson"
    FEJER = "fejer"
    POWER = "power"


@dataclass(frozen=True)
class SmoothingKernel:
    """
    An even integrable weight g and its transform a.

    POISSON: g = (1/pi) / (1 + lam^2), a(t) = exp(-|t|) / (2 pi).
    FEJER: a(t) = max(0, 1 - |t|/b), g(lam) = b sinc^2(b lam / 2).
    POWER: a(t) = (1 + t^2)^(-gamma/2), g through the modified Bessel function K.
    ``scale`` multiplies both g and a.
    """

    form: KernelForm
    bandwidth: float = 1.0
    exponent: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "form", KernelForm(self.form))
        if not math.isfinite(self.scale):
            raise DomainError(f"kernel scale must be finite, got {self.scale}")
        if self.form is KernelForm.FEJER and not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise DomainError(f"Fejer bandwidth must be positive, got {self.bandwidth}")
        if self.form is KernelForm.POWER and not (math.isfinite(self.exponent) and self.exponent > 0):
            raise DomainError(f"power kernel exponent gamma must be positive, got {self.exponent}")

    @property
    def gamma(self) -> float:
        """Decay exponent of a(t); infinite for POISSON and FEJER."""
        return self.exponent if self.form is KernelForm.POWER else math.inf

    @property
    def decay(self) -> Union[float, str]:
        """gamma, or the "exponential" marker when a(t) decays faster than any power."""
        return self.exponent if self.form is KernelForm.POWER else EXPONENTIAL

    @property
    def singular_at_origin(self) -> bool:
        return self.form is KernelForm.POWER and self.exponent <= 1.0

    def density(self, lam: ArrayLike) -> ArrayLike:
        return kernel_density(self, lam)

    def fourier(self, t: ArrayLike) -> ArrayLike:
        return kernel_fourier(self, t)

    def rescaled(self, factor: float) -> "SmoothingKernel":
        return SmoothingKernel(self.form, self.bandwidth, self.exponent, self.scale * factor)


def poisson(scale: float = 1.0) -> SmoothingKernel:
    return SmoothingKernel(KernelForm.POISSON, scale=scale)


def fejer(bandwidth: float = 1.0, scale: float = 1.0) -> SmoothingKernel:
    return SmoothingKernel(KernelForm.FEJER, bandwidth=bandwidth, scale=scale)


def power(exponent: float, scale: float = 1.0) -> SmoothingKernel:
    return SmoothingKernel(KernelForm.POWER, exponent=exponent, scale=scale)


# ========================================================================
# TRANSFORM PAIR
# ========================================================================

def kernel_fourier(kernel: SmoothingKernel, t: ArrayLike) -> ArrayLike:
    """
    Evaluate a(t) = (1/2pi) * integral of exp(i lam t) g(lam) dlam.

    Args:
        kernel: The smoothing kernel
        t: Lag or array of lags

    Returns:
        a(t), even in t, same shape as ``t``
    """
    scalar = np.ndim(t) == 0
    lags = np.abs(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(lags)):
        raise DomainError("lag must be finite")

    if kernel.form is KernelForm.POISSON:
        values = np.exp(-lags) / (2.0 * math.pi)
    elif kernel.form is KernelForm.FEJER:
        values = np.maximum(0.0, 1.0 - lags / kernel.bandwidth)
    else:
        values = (1.0 + lags * lags) ** (-0.5 * kernel.exponent)

    values = kernel.scale * values
    return float(values) if scalar else values


def kernel_density(kernel: SmoothingKernel, lam: ArrayLike) -> ArrayLike:
    """
    Evaluate the weight g(lam).

    Raises:
        DomainError: At lam = 0 for a POWER kernel with gamma <= 1 (integrable pole)
        NumericalError: If the Bessel evaluation of a POWER kernel is not finite
    """
    scalar = np.ndim(lam) == 0
    lam = np.abs(np.asarray(lam, dtype=float))
    if not np.all(np.isfinite(lam)):
        raise DomainError("frequency must be finite")

    if kernel.form is KernelForm.POISSON:
        values = (1.0 / math.pi) / (1.0 + lam * lam)
    elif kernel.form is KernelForm.FEJER:
        b = kernel.bandwidth
        # numpy's sinc is sin(pi x) / (pi x)
        values = b * np.sinc(b * lam / (2.0 * math.pi)) ** 2
    else:
        values = _power_density(kernel.exponent, lam)

    values = kernel.scale * values
    return float(values) if scalar else values


def _power_density(gamma: float, lam: np.ndarray) -> np.ndarray:
    # g(lam) = 2 int_0^inf cos(lam t) (1 + t^2)^(-gamma/2) dt
    #        = (2 sqrt(pi) / Gamma(gamma/2)) (lam/2)^nu K_nu(lam), nu = (gamma - 1)/2
    nu = 0.5 * (gamma - 1.0)
    at_zero = lam == 0.0
    if np.any(at_zero) and gamma <= 1.0:
        raise DomainError(f"power kernel with gamma={gamma} has an integrable pole at lambda = 0")

    out = np.empty_like(lam)
    positive = ~at_zero
    x = lam[positive]
    prefactor = 2.0 * math.sqrt(math.pi) / special.gamma(0.5 * gamma)
    with np.errstate(under="ignore"):
        out[positive] = prefactor * (0.5 * x) ** nu * special.kv(nu, x)
    if np.any(at_zero):
        out[at_zero] = math.sqrt(math.pi) * special.gamma(nu) / special.gamma(0.5 * gamma)

    if not np.all(np.isfinite(out)):
        raise NumericalError(f"power kernel transform is not finite for gamma={gamma}")
    return out


# ========================================================================
# DECAY CHECK
# ========================================================================

@dataclass(frozen=True)
class KernelDecayCheck:
    holds: bool
    exponent: float
    fitted_C: float
    tail_slope: float


def verify_kernel_decay(kernel: SmoothingKernel, t_grid: Optional[Sequence[float]] = None,
                        exponent: Optional[float] = None,
                        slope_tol: float = 1e-2) -> KernelDecayCheck:
    """
    Check |a(t)| <= C t^(-gamma) on a grid, by default t in [1, 1e3].

    The bound is taken to hold when |a(t)| t^gamma does not grow over the
    last decade of the grid (log-log slope below ``slope_tol``); the fitted
    C is the maximum of |a(t)| t^gamma on the grid.

    Args:
        kernel: The smoothing kernel
        t_grid: Positive lags, defaults to 200 log-spaced points on [1, 1e3]
        exponent: gamma to check, defaults to the kernel's own (3 for
            exponentially decaying transforms)
        slope_tol: Largest log-log slope of the scaled transform that
            still counts as bounded
    """
    times = np.logspace(0.0, 3.0, 200) if t_grid is None else np.asarray(t_grid, dtype=float)
    if np.any(times <= 0):
        raise DomainError("decay is checked on positive lags only")
    if exponent is None:
        exponent = kernel.gamma if math.isfinite(kernel.gamma) else 3.0

    scaled = np.abs(np.asarray(kernel_fourier(kernel, times), dtype=float)) * times ** exponent
    tail = (times >= times.max() / 10.0) & (scaled > 0)
    if np.count_nonzero(tail) >= 2:
        slope = float(np.polyfit(np.log(times[tail]), np.log(scaled[tail]), 1)[0])
    else:
        slope = -math.inf

    fitted = float(scaled.max())
    logger.debug("kernel %s decay check: C=%.4g slope=%.3g", kernel.form.value, fitted, slope)
    return KernelDecayCheck(holds=bool(math.isfinite(fitted) and slope <= slope_tol),
                            exponent=float(exponent), fitted_C=fitted, tail_slope=slope)
