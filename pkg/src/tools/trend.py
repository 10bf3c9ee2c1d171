"""Deterministic trends M(t) with |M(t)| <= C t^(-beta), and bound checks."""
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np

from ..utils.errors import DomainError

MIN_BETA = 0.25

ArrayLike = Union[float, np.ndarray]


class TrendForm(str, Enum):
    SHIFTED_POWER = "shifted_power"
    ZERO = "zero"


@dataclass(frozen=True)
class TrendSpec:
    """M(t) = C (1 + t)^(-beta) for SHIFTED_POWER, M = 0 for ZERO."""

    form: TrendForm
    scale_C: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "form", TrendForm(self.form))
        if not np.isfinite(self.scale_C) or self.scale_C < 0:
            raise DomainError(f"trend scale C must be finite and >= 0, got {self.scale_C}")
        if not self.beta > MIN_BETA:
            raise DomainError(
                f"trend decay exponent beta must be > 1/4, got {self.beta}: the small-trend "
                "robustness result assumes |M(t)| <= C|t|^(-beta) with beta > 1/4"
            )


ZERO_TREND = TrendSpec(TrendForm.ZERO)


def shifted_power(scale_C: float, beta: float) -> TrendSpec:
    return TrendSpec(TrendForm.SHIFTED_POWER, scale_C, beta)


def eval_trend(spec: TrendSpec, t: ArrayLike) -> ArrayLike:
    """
    Evaluate M(t) for t >= 0.

    Args:
        spec: The trend
        t: Time or array of times

    Returns:
        M(t), same shape as ``t``

    Raises:
        DomainError: For negative times
    """
    scalar = np.ndim(t) == 0
    times = np.asarray(t, dtype=float)
    if np.any(times < 0):
        raise DomainError("trend is evaluated on t >= 0 only")

    if spec.form is TrendForm.ZERO:
        values = np.zeros_like(times)
    else:
        values = spec.scale_C * (1.0 + times) ** (-spec.beta)
    return float(values) if scalar else values


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    max_ratio: float


def verify_bound(spec: TrendSpec, t_grid: Sequence[float],
                 trend: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> BoundCheck:
    """
    Check |M(t)| <= C t^(-beta) on a grid of positive times.

    Args:
        spec: Supplies C and beta (and M itself unless ``trend`` is given)
        t_grid: Positive times
        trend: Optional replacement for M, checked against the same bound

    Returns:
        BoundCheck with the verdict and max |M(t)| t^beta / C
    """
    times = np.asarray(t_grid, dtype=float)
    if np.any(times <= 0):
        raise DomainError("bound is checked on positive times only")

    values = np.abs(np.asarray(trend(times) if trend is not None else eval_trend(spec, times),
                               dtype=float))
    scaled = values * times ** spec.beta
    if spec.scale_C == 0.0:
        ratio = 0.0 if not np.any(scaled > 0) else np.inf
    else:
        ratio = float(np.max(scaled) / spec.scale_C)
    return BoundCheck(holds=bool(np.all(values <= spec.scale_C * times ** (-spec.beta))),
                      max_ratio=ratio)


def trend_path(spec: TrendSpec, times: np.ndarray) -> np.ndarray:
    """M sampled at the given grid times."""
    return np.asarray(eval_trend(spec, np.asarray(times, dtype=float)), dtype=float)
