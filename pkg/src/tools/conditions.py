"""Checker for the decay conditions under which a small trend leaves smoothed
periodogram asymptotics unchanged.

Hypotheses, with |M(t)| <= C|t|^-beta, |a(t)| <= C|t|^-gamma, |r(t)| <= C|t|^-alpha:

    base:    2 beta + gamma > 3/2 and beta > 1/4
    case i:  (SM or IM memory) beta + gamma > 1
    case ii: (LM memory) alpha + gamma >= 3/2, and alpha + 2 beta > 1 if beta < 1 < gamma

All inequalities are evaluated in exact rational arithmetic.
"""
import logging
import math
from enum import Enum
from fractions import Fraction
from typing import List, Union

from pydantic import BaseModel

from ..utils.errors import DomainError
from .spectral_models import EXPONENTIAL, MemoryClass

logger = logging.getLogger(__name__)

Exponent = Union[float, str]

# Stand-in for gamma = +inf; every inequality is monotone in gamma
_UNBOUNDED = Fraction(10) ** 12


class Verdict(str, Enum):
    THEOREM_APPLIES = "THEOREM_APPLIES"
    NOT_COVERED = "NOT_COVERED"


class Variant(str, Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"
    DISCRETE_RESTRICTED = "discrete_restricted"


class ConditionReport(BaseModel):
    alpha: Exponent
    beta: float
    gamma: Exponent
    memory: MemoryClass
    variant: Variant
    mappings: List[str]
    base: bool
    case_i: bool
    case_ii: bool
    sufficient_i: bool
    sufficient_ii: bool
    verdict: Verdict
    d_rate_exponent: float


def _exact(value: float, name: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
        raise DomainError(f"{name} must be a number or '{EXPONENTIAL}', got {value!r}")
    if isinstance(value, float) and not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value if isinstance(value, Fraction) else Fraction(repr(value))


def _is_marker(value: Exponent) -> bool:
    return isinstance(value, str) or (isinstance(value, float) and math.isinf(value) and value > 0)


def check_conditions(alpha: Exponent, beta: float, gamma: Exponent,
                     memory: Union[MemoryClass, str],
                     variant: Union[Variant, str] = Variant.CONTINUOUS) -> ConditionReport:
    """
    Evaluate the robustness conditions for given decay exponents.

    Args:
        alpha: Covariance decay exponent in (0, 1], or "exponential" (mapped to 1)
        beta: Trend decay exponent, > 0
        gamma: Kernel transform decay exponent, > 0, or "exponential"/inf
            (treated as +inf)
        memory: Memory class of the process; SM and IM use case i, LM case ii
        variant: "continuous"; "discrete", the discrete-time analogue, which
            holds under the same conditions; or "discrete_restricted", the
            narrower earlier discrete-time result that adds gamma = 1 to
            case i and gamma > 1, alpha < 1/2 to case ii

    Returns:
        ConditionReport with every inequality and the verdict

    Raises:
        DomainError: For exponents outside their ranges
    """
    memory = MemoryClass(memory)
    variant = Variant(variant)
    mappings = []

    if _is_marker(alpha):
        if isinstance(alpha, str) and alpha != EXPONENTIAL:
            raise DomainError(f"alpha must be a number in (0, 1] or '{EXPONENTIAL}', got {alpha!r}")
        a = Fraction(1)
        mappings.append("alpha: exponential decay mapped to alpha = 1")
    else:
        a = _exact(alpha, "alpha")
        if not 0 < a <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")

    b = _exact(beta, "beta")
    if not b > 0:
        raise DomainError(f"beta must be positive, got {beta}")

    if _is_marker(gamma):
        if isinstance(gamma, str) and gamma != EXPONENTIAL:
            raise DomainError(f"gamma must be a positive number or '{EXPONENTIAL}', got {gamma!r}")
        g = _UNBOUNDED
        gamma_infinite = True
        mappings.append("gamma: faster than any power mapped to gamma = +inf")
    else:
        g = _exact(gamma, "gamma")
        gamma_infinite = False
        if not g > 0:
            raise DomainError(f"gamma must be positive, got {gamma}")

    half, three_halves = Fraction(1, 2), Fraction(3, 2)
    base = 2 * b + g > three_halves and b > Fraction(1, 4)
    case_i = b + g > 1
    case_ii = a + g >= three_halves and (not (b < 1 < g) or a + 2 * b > 1)
    if variant is Variant.DISCRETE_RESTRICTED:
        case_i = case_i and g == 1
        case_ii = case_ii and g > 1 and a < half

    sufficient_i = b > half and g >= half
    sufficient_ii = a >= Fraction(3, 4) and b > Fraction(3, 8) and g >= Fraction(3, 4)

    applies = base and (case_ii if memory is MemoryClass.LM else case_i)
    rates = [-half, half - 2 * b]
    if not gamma_infinite:
        rates.append(three_halves - 2 * b - g)

    report = ConditionReport(
        alpha=EXPONENTIAL if _is_marker(alpha) else float(alpha),
        beta=float(beta),
        gamma=EXPONENTIAL if gamma_infinite else float(gamma),
        memory=memory,
        variant=variant,
        mappings=mappings,
        base=base,
        case_i=case_i,
        case_ii=case_ii,
        sufficient_i=sufficient_i,
        sufficient_ii=sufficient_ii,
        verdict=Verdict.THEOREM_APPLIES if applies else Verdict.NOT_COVERED,
        d_rate_exponent=float(max(rates)),
    )
    logger.debug("conditions alpha=%s beta=%s gamma=%s %s -> %s",
                 alpha, beta, gamma, memory.value, report.verdict.value)
    return report
