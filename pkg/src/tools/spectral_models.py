"""Parametric spectral-density families, their covariances and memory class.

Fourier convention: r(t) = integral over the real line of exp(i*lam*t) f(lam),
with no 2*pi factor, so r(0) is the total mass of f.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy import special

from ..utils.errors import DomainError
from ..utils.quadrature import check_tolerance, quad_with_error

logger = logging.getLogger(__name__)

EXPONENTIAL = "exponential"
COVARIANCE_REL_TOL = 1e-6

ArrayLike = Union[float, np.ndarray]


class Family(str, Enum):
    FRBM = "frbm"
    OU = "ou"
    SCALED = "scaled"


class MemoryClass(str, Enum):
    SM = "SM"
    IM = "IM"
    LM = "LM"


PARAM_NAMES: Dict[Family, Tuple[str, ...]] = {
    Family.FRBM: ("u", "v", "c"),
    Family.OU: ("rate", "sigma2"),
}


@dataclass(frozen=True)
class SpectralModel:
    """A spectral density f(lam, theta) together with its family.

    For SCALED, ``theta`` is ``(factor,)`` and ``base`` holds the wrapped
    model; f = factor * f_base.
    """

    family: Family
    theta: Tuple[float, ...]
    base: Optional["SpectralModel"] = None

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(x) for x in self.theta))
        _validate(self)

    @property
    def params(self) -> Dict[str, float]:
        return dict(zip(param_names(self), self.all_values()))

    def all_values(self) -> Tuple[float, ...]:
        if self.family is Family.SCALED:
            return self.base.all_values() + self.theta
        return self.theta

    @property
    def alpha_decay(self) -> Union[float, str]:
        """Decay exponent of the covariance, or "exponential"."""
        if self.family is Family.FRBM:
            return 1.0 - 2.0 * self.theta[0]
        if self.family is Family.OU:
            return EXPONENTIAL
        return self.base.alpha_decay

    @property
    def origin_exponent(self) -> float:
        """p such that f(lam) ~ |lam|^(-p) at the origin."""
        if self.family is Family.FRBM:
            return 2.0 * self.theta[0]
        if self.family is Family.OU:
            return 0.0
        return self.base.origin_exponent

    @property
    def tail_exponent(self) -> float:
        """q such that f(lam) ~ |lam|^(-q) at infinity."""
        if self.family is Family.FRBM:
            return 2.0 * (self.theta[0] + self.theta[1])
        if self.family is Family.OU:
            return 2.0
        return self.base.tail_exponent

    @property
    def singular_at_origin(self) -> bool:
        return self.origin_exponent > 0.0


def _validate(model: SpectralModel) -> None:
    if model.family is Family.SCALED:
        if model.base is None:
            raise DomainError("SCALED model needs a base model")
        if len(model.theta) != 1 or not model.theta[0] > 0:
            raise DomainError(f"SCALED factor must be a single positive number, got {model.theta}")
        return

    if model.base is not None:
        raise DomainError(f"{model.family.value} model does not take a base model")
    expected = PARAM_NAMES[model.family]
    if len(model.theta) != len(expected):
        raise DomainError(
            f"{model.family.value} expects parameters {expected}, got {len(model.theta)} values"
        )
    if not all(math.isfinite(x) for x in model.theta):
        raise DomainError(f"{model.family.value} parameters must be finite, got {model.theta}")

    if model.family is Family.FRBM:
        u, v, c = model.theta
        if not 0.0 < u < 0.5:
            raise DomainError(f"fRBm requires 0 < u < 1/2, got u={u}")
        if not v > 0.0:
            raise DomainError(f"fRBm requires v > 0, got v={v}")
        if not u + v > 0.5:
            raise DomainError(f"fRBm requires u + v > 1/2, got u + v={u + v}")
        if not c > 0.0:
            raise DomainError(f"fRBm requires c > 0, got c={c}")
    elif model.family is Family.OU:
        rate, sigma2 = model.theta
        if not rate > 0.0:
            raise DomainError(f"OU requires rate > 0, got {rate}")
        if not sigma2 > 0.0:
            raise DomainError(f"OU requires sigma2 > 0, got {sigma2}")


def frbm(u: float, v: float, c: float = 1.0) -> SpectralModel:
    return SpectralModel(Family.FRBM, (u, v, c))


def ou(rate: float, sigma2: float = 1.0) -> SpectralModel:
    return SpectralModel(Family.OU, (rate, sigma2))


def scaled(base: SpectralModel, factor: float) -> SpectralModel:
    return SpectralModel(Family.SCALED, (factor,), base=base)


def param_names(model: SpectralModel) -> Tuple[str, ...]:
    if model.family is Family.SCALED:
        return param_names(model.base) + ("factor",)
    return PARAM_NAMES[model.family]


def scale_param(model: SpectralModel) -> str:
    """Name of the parameter in which f is linear."""
    if model.family is Family.FRBM:
        return "c"
    if model.family is Family.OU:
        return "sigma2"
    return "factor"


def with_params(model: SpectralModel, **values: float) -> SpectralModel:
    """Return a copy of ``model`` with the named parameters replaced."""
    unknown = set(values) - set(param_names(model))
    if unknown:
        raise DomainError(f"Unknown parameters {sorted(unknown)} for {model.family.value}")

    if model.family is Family.SCALED:
        factor = values.pop("factor", model.theta[0])
        base = with_params(model.base, **values) if values else model.base
        return SpectralModel(Family.SCALED, (factor,), base=base)

    names = PARAM_NAMES[model.family]
    theta = tuple(float(values.get(name, old)) for name, old in zip(names, model.theta))
    return dataclasses.replace(model, theta=theta)


# ========================================================================
# DENSITY
# ========================================================================

def eval_density(model: SpectralModel, lam: ArrayLike) -> ArrayLike:
    """
    Evaluate the spectral density f(lam).

    Args:
        model: The spectral model
        lam: Frequency or array of frequencies

    Returns:
        f(lam), same shape as ``lam``; exactly even in ``lam``

    Raises:
        DomainError: For fRBm at lam = 0 (origin singularity) or non-finite lam
    """
    scalar = np.ndim(lam) == 0
    lam = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(lam)):
        raise DomainError("frequency must be finite")

    value = _density(model, np.abs(lam))
    return float(value) if scalar else value


def _density(model: SpectralModel, lam_abs: np.ndarray) -> np.ndarray:
    if model.family is Family.FRBM:
        u, v, c = model.theta
        if np.any(lam_abs == 0.0):
            raise DomainError(f"fRBm density has an origin singularity (u={u}) at lambda = 0")
        return c / (lam_abs ** (2.0 * u) * (1.0 + lam_abs * lam_abs) ** v)
    if model.family is Family.OU:
        rate, sigma2 = model.theta
        return sigma2 * rate / (math.pi * (rate * rate + lam_abs * lam_abs))
    return model.theta[0] * _density(model.base, lam_abs)


def density_integral(model: SpectralModel) -> float:
    """Total mass of f, equal to r(0)."""
    return covariance(model, 0.0)


# ========================================================================
# COVARIANCE
# ========================================================================

def covariance(model: SpectralModel, t: ArrayLike, method: str = "auto") -> ArrayLike:
    """
    Covariance r(t) = integral of exp(i lam t) f(lam) over the real line.

    OU uses the closed form sigma2 * exp(-rate |t|). fRBm has no closed form
    and goes through adaptive quadrature with the origin singularity removed
    by substitution. ``method="quadrature"`` forces the quadrature route for
    any family.

    Args:
        model: The spectral model
        t: Lag or array of lags
        method: "auto" or "quadrature"

    Returns:
        r(t), same shape as ``t``

    Raises:
        NumericalError: If the quadrature misses relative tolerance 1e-6
    """
    if method not in ("auto", "quadrature"):
        raise DomainError(f"Unknown covariance method '{method}'")

    scalar = np.ndim(t) == 0
    lags = np.abs(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(lags)):
        raise DomainError("lag must be finite")

    if method == "auto" and model.family is Family.OU:
        rate, sigma2 = model.theta
        values = sigma2 * np.exp(-rate * lags)
    elif method == "auto" and model.family is Family.SCALED:
        values = model.theta[0] * np.asarray(covariance(model.base, lags), dtype=float)
    else:
        flat = np.array([_covariance_quad(model, float(x)) for x in lags.ravel()])
        values = flat.reshape(lags.shape)

    return float(values) if scalar else values


@lru_cache(maxsize=65536)
def _covariance_quad(model: SpectralModel, t: float) -> float:
    # r(t) = 2 * integral_0^inf cos(lam t) f(lam) dlam, split at lam = 1
    if model.family is Family.SCALED:
        return model.theta[0] * _covariance_quad(model.base, t)

    def f(x):
        return float(_density(model, np.array(x)))

    if model.family is Family.FRBM:
        head, head_err = _frbm_head(model, t)
    else:
        head, head_err = quad_with_error(lambda x: f(x) * math.cos(x * t), 0.0, 1.0,
                                         what=f"covariance head at t={t}")

    if t == 0.0:
        tail, tail_err = quad_with_error(f, 1.0, np.inf, what="covariance tail at t=0")
    else:
        tail, tail_err = quad_with_error(f, 1.0, np.inf, weight="cos", wvar=t,
                                         what=f"covariance tail at t={t}")

    value = 2.0 * (head + tail)
    check_tolerance(value, 2.0 * (head_err + tail_err), COVARIANCE_REL_TOL,
                    f"{model.family.value} covariance at t={t}")
    logger.debug("covariance %s at t=%g -> %.12g", model.family.value, t, value)
    return value


def _frbm_head(model: SpectralModel, t: float) -> Tuple[float, float]:
    # integral_0^1 cos(lam t) c lam^(-2u) (1 + lam^2)^(-v) dlam with lam = mu^(1/(1-2u)):
    # lam^(-2u) dlam = dmu / (1 - 2u), leaving a smooth integrand on [0, 1]
    u, v, c = model.theta
    power = 1.0 / (1.0 - 2.0 * u)

    def integrand(mu):
        lam = mu ** power
        return math.cos(lam * t) * (1.0 + lam * lam) ** (-v)

    # Break points at the zeros of cos(lam t) keep the oscillation resolved
    points = None
    if t > math.pi:
        zeros = np.arange(0.5, t / math.pi) * math.pi / t
        zeros = zeros[zeros < 1.0] ** (1.0 / power)
        points = list(zeros[:150])
    value, abserr = quad_with_error(integrand, 0.0, 1.0, points=points,
                                    what=f"fRBm covariance head at t={t}")
    return c * power * value, c * power * abserr


# ========================================================================
# MEMORY CLASSIFICATION
# ========================================================================

def classify_memory(model: SpectralModel) -> MemoryClass:
    """
    Classify the memory of a model from the closed-form behaviour of f at 0.

    Returns:
        SM if 0 < f(0) < inf, IM if f(0) = 0, LM if f has a pole at 0
    """
    if model.family is Family.FRBM:
        return MemoryClass.LM if model.theta[0] > 0.0 else MemoryClass.SM
    if model.family is Family.OU:
        return MemoryClass.SM
    return classify_memory(model.base)


# ========================================================================
# fRBm COVARIANCE ASYMPTOTE
# ========================================================================

def frbm_covariance_asymptote(model: SpectralModel, t: ArrayLike,
                              constant: Optional[float] = None,
                              sine_argument: Optional[float] = None) -> ArrayLike:
    """
    Leading large-lag term of the fRBm covariance.

    r(t) ~ C * t^(2u-1) * sin(pi * s) * Gamma(1 - 2u). Under this module's
    Fourier convention C = 2c and s = u; both can be overridden.

    Args:
        model: An fRBm model with v > 1/2
        t: Positive lag(s)
        constant: C, defaults to 2c
        sine_argument: s, defaults to u

    Raises:
        DomainError: For a non-fRBm model, v <= 1/2 or t <= 0
    """
    if model.family is not Family.FRBM:
        raise DomainError(f"covariance asymptote is defined for fRBm only, got {model.family.value}")
    u, v, c = model.theta
    if not v > 0.5:
        raise DomainError(f"covariance asymptote needs v > 1/2, got v={v}")

    scalar = np.ndim(t) == 0
    lags = np.asarray(t, dtype=float)
    if np.any(lags <= 0):
        raise DomainError("covariance asymptote needs t > 0")

    big_c = 2.0 * c if constant is None else constant
    s = u if sine_argument is None else sine_argument
    value = big_c * lags ** (2.0 * u - 1.0) * math.sin(math.pi * s) * special.gamma(1.0 - 2.0 * u)
    return float(value) if scalar else value


def fit_asymptote_ratio(model: SpectralModel, lags) -> Dict[str, object]:
    """
    Compare covariance() with the asymptote on a lag grid.

    Returns:
        Dict with the lags, per-lag ratios, their mean and the ratio at the largest lag
    """
    lags = np.asarray(lags, dtype=float)
    exact = np.asarray(covariance(model, lags), dtype=float)
    leading = np.asarray(frbm_covariance_asymptote(model, lags), dtype=float)
    ratios = exact / leading
    return {
        "lags": lags.tolist(),
        "ratios": ratios.tolist(),
        "mean_ratio": float(np.mean(ratios)),
        "ratio_at_largest_lag": float(ratios[np.argmax(lags)]),
    }
