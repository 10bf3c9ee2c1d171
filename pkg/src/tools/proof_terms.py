"""Deterministic quantities that control the trend's effect on smoothed functionals.

    D(T)    = T^(-1/2) * double integral over [0, T]^2 of M(t) M(s) a(t - s)
    nu(s)   = integral over [0, T] of M(t) a(t - s) dt
    J(T)    = double integral over [0, T]^2 of |nu(s) nu(tau) r(s - tau)|

D(T) -> 0 and J(T) = o(T) are what make the trend negligible.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from ..utils.errors import DomainError
from ..utils.quadrature import checked_quad
from ..utils.toeplitz import SymmetricToeplitz, trapezoid_weights
from .kernels import KernelForm, SmoothingKernel, kernel_fourier
from .spectral_models import SpectralModel, covariance
from .trend import TrendForm, TrendSpec, eval_trend

logger = logging.getLogger(__name__)

DEFAULT_D_POINTS = 4096
DEFAULT_J_NODES = 512
SUBGRID = 16


# ========================================================================
# TREND-TREND TERM
# ========================================================================

def trend_trend_term(trend: TrendSpec, kernel: SmoothingKernel, T: float,
                     points: int = DEFAULT_D_POINTS, absolute: bool = False) -> float:
    """
    D(T) by the 2-D trapezoid rule, with the Toeplitz structure in t - s
    handled by FFT.

    Args:
        trend: Trend M
        kernel: Smoothing kernel supplying a(t)
        T: Horizon, >= 1
        points: Nodes per axis; the step T/(points - 1) must not exceed T/2048
        absolute: Integrate |M(t) M(s) a(t - s)| instead

    Returns:
        D(T)
    """
    if not T >= 1.0:
        raise DomainError(f"T must be >= 1, got {T}")
    if points < 2049:
        raise DomainError(f"D(T) needs at least 2049 nodes per axis, got {points}")
    if trend.form is TrendForm.ZERO:
        return 0.0

    nodes = np.linspace(0.0, T, points)
    step = nodes[1]
    trend_values = np.asarray(eval_trend(trend, nodes), dtype=float)
    kernel_values = np.asarray(kernel_fourier(kernel, nodes), dtype=float)
    if absolute:
        trend_values, kernel_values = np.abs(trend_values), np.abs(kernel_values)

    weighted = trapezoid_weights(points, step) * trend_values
    value = SymmetricToeplitz(kernel_values).quadratic_form(weighted) / math.sqrt(T)
    logger.debug("D(%g) = %.10g with %d nodes", T, value, points)
    return value


# ========================================================================
# NU FUNCTION
# ========================================================================

def nu_function(trend: TrendSpec, kernel: SmoothingKernel, T: float, s: float,
                rel_tol: float = 1e-8) -> float:
    """
    nu(s) = integral over [0, T] of M(t) a(t - s) dt by adaptive quadrature,
    split at the kink of a at t = s and cut to the kernel's support.
    """
    if not 0.0 <= s <= T:
        raise DomainError(f"s must lie in [0, T], got s={s}, T={T}")
    if trend.form is TrendForm.ZERO:
        return 0.0

    lower, upper = 0.0, T
    if kernel.form is KernelForm.FEJER:
        lower, upper = max(0.0, s - kernel.bandwidth), min(T, s + kernel.bandwidth)
    if upper <= lower:
        return 0.0

    def integrand(t):
        return eval_trend(trend, t) * kernel_fourier(kernel, t - s)

    return checked_quad(integrand, lower, upper, rel_tol=rel_tol, points=[s],
                        what=f"nu({s:g}) at T={T:g}")


def nu_on_grid(trend: TrendSpec, kernel: SmoothingKernel, T: float, nodes: np.ndarray) -> np.ndarray:
    return np.array([nu_function(trend, kernel, T, float(s)) for s in nodes])


def _nu_bound_shape(trend: TrendSpec, kernel: SmoothingKernel, T: float, s: np.ndarray) -> np.ndarray:
    beta, gamma = trend.beta, kernel.gamma
    shape = s ** (-beta)
    if math.isfinite(gamma):
        shape = shape + s ** (1.0 - beta - gamma) + s ** (-gamma)
    return math.log(T) * shape


@dataclass(frozen=True)
class NuBoundCheck:
    holds: bool
    fitted_C: float
    check_C: float
    T_fit: float
    T_check: float


def nu_bound_check(trend: TrendSpec, kernel: SmoothingKernel, T_fit: float, T_check: float,
                   points: int = 64) -> NuBoundCheck:
    """
    Fit C in |nu(s)| <= C log T (s^(1-beta-gamma) + s^(-beta) + s^(-gamma)) on
    s in (1, T_fit) and check that the same C bounds |nu| on (1, T_check).

    Terms in gamma drop out for kernels whose transform decays faster than any power.
    """
    if not (1.0 < T_fit < T_check):
        raise DomainError(f"need 1 < T_fit < T_check, got {T_fit}, {T_check}")

    def max_ratio(T: float) -> float:
        s = np.geomspace(1.0, T, points + 2)[1:-1]
        nu = np.abs(nu_on_grid(trend, kernel, T, s))
        return float(np.max(nu / _nu_bound_shape(trend, kernel, T, s)))

    fitted = max_ratio(T_fit)
    checked = max_ratio(T_check)
    return NuBoundCheck(holds=bool(checked <= fitted * (1.0 + 1e-9)), fitted_C=fitted,
                        check_C=checked, T_fit=float(T_fit), T_check=float(T_check))


# ========================================================================
# VARIANCE BOUND TERM
# ========================================================================

@dataclass(frozen=True)
class VarianceBound:
    J: float
    J_over_T: float
    nodes: int


def _hat_moments(model: SpectralModel, step: float, nodes: int) -> np.ndarray:
    """K[l] = integral over [0, step] of |r(l step - x)| (1 - x/step) dx for l = -(N-1)..N-1.

    Returned with index l + N - 1.
    """
    fine = step / SUBGRID
    # |r| at lags p * fine, p = 0..N*SUBGRID, covers every l step - x used below
    lags = np.arange(nodes * SUBGRID + 1) * fine
    abs_r = np.abs(np.asarray(covariance(model, lags), dtype=float))

    x_index = np.arange(SUBGRID + 1)
    hat = trapezoid_weights(SUBGRID + 1, fine) * (1.0 - x_index / SUBGRID)
    offsets = np.arange(-(nodes - 1), nodes)
    # lag index of l * step - x_k is l * SUBGRID - k, taken in absolute value
    positions = np.abs(offsets[:, None] * SUBGRID - x_index[None, :])
    return abs_r[positions] @ hat


def variance_bound_term(trend: TrendSpec, kernel: SmoothingKernel, model: SpectralModel,
                        T: float, nodes: int = DEFAULT_J_NODES) -> VarianceBound:
    """
    J(T) on a nodes x nodes grid.

    nu is sampled at the nodes and treated as piecewise linear; |r| is
    integrated against each hat function on a fine sub-grid (product
    integration), so the kink of |r| at lag 0 is resolved. The outer
    integral in s is a trapezoid sum and the Toeplitz structure in s - tau
    is handled by FFT.

    Returns:
        VarianceBound with J(T) and J(T)/T

    Raises:
        NumericalError: Propagated from covariance or nu quadratures
    """
    if not T >= 1.0:
        raise DomainError(f"T must be >= 1, got {T}")
    if nodes < 16:
        raise DomainError(f"J(T) needs at least 16 nodes, got {nodes}")
    if trend.form is TrendForm.ZERO:
        return VarianceBound(J=0.0, J_over_T=0.0, nodes=nodes)

    grid = np.linspace(0.0, T, nodes)
    step = grid[1]
    nu_abs = np.abs(nu_on_grid(trend, kernel, T, grid))

    half = _hat_moments(model, step, nodes)
    center = nodes - 1
    full = half[center:] + half[center::-1]  # K[l] + K[-l], l = 0..N-1

    inner = SymmetricToeplitz(full).matvec(nu_abs)
    # End nodes carry one-sided hats: drop the half lying outside [0, T]
    idx = np.arange(nodes)
    inner -= half[center - idx] * nu_abs[0]
    inner -= half[center - (nodes - 1 - idx)] * nu_abs[-1]

    value = float(np.sum(trapezoid_weights(nodes, step) * nu_abs * inner))
    logger.debug("J(%g) = %.10g with %d nodes", T, value, nodes)
    return VarianceBound(J=value, J_over_T=value / T, nodes=nodes)


# ========================================================================
# RATES
# ========================================================================

@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float


def fit_rate(Ts: Sequence[float], values: Sequence[float]) -> RateFit:
    """Least-squares slope of log|value| against log T."""
    Ts = np.asarray(Ts, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    if Ts.size < 2 or Ts.size != values.size:
        raise DomainError("rate fit needs at least two (T, value) pairs of equal length")
    if np.any(Ts <= 0) or np.any(values <= 0):
        raise DomainError("rate fit needs positive T and nonzero values")
    slope, intercept = np.polyfit(np.log(Ts), np.log(values), 1)
    return RateFit(slope=float(slope), intercept=float(intercept))


def ladder_summary(Ts: Sequence[float], values: Sequence[float]) -> Dict[str, Optional[float]]:
    """Monotonicity flag and fitted log-log slope of a statistic along a T ladder."""
    values = [float(v) for v in values]
    decreasing = all(b < a for a, b in zip(values, values[1:]))
    slope = None
    if len(values) >= 2 and all(v != 0.0 for v in values):
        slope = fit_rate(Ts, values).slope
    return {"strictly_decreasing": decreasing, "fitted_slope": slope}
