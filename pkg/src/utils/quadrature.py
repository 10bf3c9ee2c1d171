"""Thin wrappers over QUADPACK that turn silent accuracy loss into errors."""
import logging
import warnings
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .errors import NumericalError

logger = logging.getLogger(__name__)

DEFAULT_EPSREL = 1e-10
DEFAULT_EPSABS = 1e-13
ABS_FLOOR = 1e-10


def quad_with_error(func: Callable[[float], float], a: float, b: float,
                    points: Optional[Sequence[float]] = None,
                    weight: Optional[str] = None, wvar=None,
                    limit: int = 2000, what: str = "integral") -> Tuple[float, float]:
    """Run scipy.integrate.quad asking for far more accuracy than any caller needs.

    Returns:
        (value, error estimate)

    Raises:
        NumericalError: If the value is not finite
    """
    kwargs = {"epsabs": DEFAULT_EPSABS, "epsrel": DEFAULT_EPSREL, "limit": limit}
    if weight is not None:
        kwargs.update(weight=weight, wvar=wvar)
        if weight in ("cos", "sin") and np.isinf(b):
            # Fourier integrals over [a, inf) use the absolute tolerance only
            kwargs["limlst"] = 200
    elif points is not None and np.isfinite(b):
        inner = [p for p in points if a < p < b]
        if inner:
            kwargs["points"] = inner

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr = integrate.quad(func, a, b, **kwargs)

    if not np.isfinite(value):
        raise NumericalError(f"{what} is not finite on [{a}, {b}]", achieved_tolerance=np.inf)
    return float(value), float(abserr)


def check_tolerance(value: float, abserr: float, rel_tol: float, what: str,
                    abs_floor: float = ABS_FLOOR) -> float:
    """Raise NumericalError unless abserr <= max(rel_tol * |value|, abs_floor)."""
    if abserr > max(rel_tol * abs(value), abs_floor):
        achieved = abserr / abs(value) if value != 0 else abserr
        raise NumericalError(
            f"{what} reached relative error {achieved:.2e}, needed {rel_tol:.1e}",
            achieved_tolerance=achieved,
        )
    return value


def checked_quad(func: Callable[[float], float], a: float, b: float,
                 rel_tol: float = 1e-6, points: Optional[Sequence[float]] = None,
                 weight: Optional[str] = None, wvar=None,
                 limit: int = 2000, what: str = "integral") -> float:
    """Integrate with quad and verify the error estimate against ``rel_tol``.

    Raises:
        NumericalError: If the error estimate misses the tolerance
    """
    value, abserr = quad_with_error(func, a, b, points=points, weight=weight,
                                    wvar=wvar, limit=limit, what=what)
    return check_tolerance(value, abserr, rel_tol, f"{what} on [{a}, {b}]")


def even_integral_to_infinity(func: Callable[[float], float], rel_tol: float = 1e-6,
                              first: float = 1.0, tail_tol: float = 1e-6,
                              max_doublings: int = 60, what: str = "integral") -> float:
    """Integrate an even, nonnegative integrand over the real line.

    Integrates [0, first] and then doubling blocks [L, 2L] until a block
    contributes less than ``tail_tol`` of the running total.

    Raises:
        NumericalError: If the tail does not die out (divergent integral)
    """
    total = checked_quad(func, 0.0, first, rel_tol=rel_tol, what=what)
    lower = first
    block = total
    for _ in range(max_doublings):
        block = checked_quad(func, lower, 2.0 * lower, rel_tol=rel_tol, what=what)
        total += block
        lower *= 2.0
        if total == 0.0 and block == 0.0:
            return 0.0
        if abs(block) <= tail_tol * abs(total):
            logger.debug("%s converged with cutoff %.3g", what, lower)
            return 2.0 * total
    raise NumericalError(
        f"{what}: tail contribution did not fall below {tail_tol:.0e} "
        f"up to lambda = {lower:.3g} (divergent tail)",
        achieved_tolerance=abs(block / total) if total else np.inf,
    )
