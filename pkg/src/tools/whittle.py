"""Weighted Whittle estimation and the estimating equations behind it.

The weighted Whittle functional of a periodogram I_T is

    U(theta) = (1/4pi) * integral of [log f(lam, theta) + I_T(lam) / f(lam, theta)] w(lam) dlam,

approximated by the trapezoid rule on the periodogram grid with the zero
frequency bin left out. Minimising U is equivalent to solving

    integral of [I_T(lam) - f(lam, theta)] g_i(lam, theta) dlam = 0,  g_i = w d(1/f)/d theta_i,

and the general estimator replaces g_i with arbitrary smoothing kernels.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from ..utils.errors import DomainError
from ..utils.quadrature import even_integral_to_infinity
from .kernels import SpectralWeight
from .periodogram import Periodogram, weight_on_grid
from .spectral_models import (
    Family,
    SpectralModel,
    eval_density,
    param_names,
    scale_param,
    with_params,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
ThetaLike = Union[Mapping[str, float], Sequence[float]]

DEFAULT_BOUNDS: Dict[str, Tuple[float, float]] = {
    "rate": (1e-3, 50.0),
    "sigma2": (1e-4, 1e3),
    "u": (1e-3, 0.499),
    "v": (0.51, 10.0),
    "c": (1e-4, 1e3),
    "factor": (1e-4, 1e3),
}

DEFAULT_FREE: Dict[Family, Tuple[str, ...]] = {
    Family.OU: ("rate", "sigma2"),
    Family.FRBM: ("u", "c"),
}


class WeightForm(str, Enum):
    RATIONAL = "rational"
    CONSTANT_ON_BAND = "constant_on_band"


@dataclass(frozen=True)
class WhittleConfig:
    """
    Settings of the Whittle estimator.

    ``theta_bounds`` maps parameter names to (low, high); parameters without
    an entry use DEFAULT_BOUNDS. ``free`` names the estimated parameters,
    the rest stay at the template model's values. With ``profile_scale`` the
    parameter in which f is linear is solved for in closed form at every
    evaluation instead of being searched over.
    """

    weight_form: WeightForm = WeightForm.RATIONAL
    theta_bounds: Mapping[str, Tuple[float, float]] = field(default_factory=dict, hash=False)
    free: Optional[Tuple[str, ...]] = None
    profile_scale: bool = False
    band: Tuple[float, float] = (0.0, 5.0)
    xatol: float = 1e-5
    fatol: float = 1e-8
    max_evals: int = 2000
    fd_step: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "weight_form", WeightForm(self.weight_form))
        bounds = {name: (float(lo), float(hi)) for name, (lo, hi) in dict(self.theta_bounds).items()}
        for name, (lo, hi) in bounds.items():
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise DomainError(f"bounds for '{name}' must be finite with low <= high, got ({lo}, {hi})")
        object.__setattr__(self, "theta_bounds", bounds)
        if self.free is not None:
            object.__setattr__(self, "free", tuple(self.free))

        lo, hi = self.band
        if not (0.0 <= lo < hi):
            raise DomainError(f"weight band must satisfy 0 <= low < high, got {self.band}")
        if self.max_evals < 1:
            raise DomainError(f"max_evals must be positive, got {self.max_evals}")
        if not (self.xatol > 0 and self.fatol > 0 and self.fd_step > 0):
            raise DomainError("optimizer tolerances and finite-difference step must be positive")

    def free_names(self, model: SpectralModel) -> Tuple[str, ...]:
        """Estimated parameters, including a profiled scale."""
        if self.free is not None:
            names = self.free
        elif model.family is Family.SCALED:
            names = DEFAULT_FREE.get(model.base.family, param_names(model.base))
        else:
            names = DEFAULT_FREE[model.family]
        unknown = set(names) - set(param_names(model))
        if unknown:
            raise DomainError(f"free parameters {sorted(unknown)} do not exist for {model.family.value}")
        return tuple(names)

    def search_names(self, model: SpectralModel) -> Tuple[str, ...]:
        """Parameters the optimizer moves; a profiled scale is excluded."""
        names = self.free_names(model)
        if self.profile_scale:
            names = tuple(name for name in names if name != scale_param(model))
        return names

    def bounds_for(self, names: Sequence[str]) -> Tuple[Tuple[float, float], ...]:
        return tuple(self.theta_bounds.get(name, DEFAULT_BOUNDS[name]) for name in names)


@dataclass(frozen=True)
class EstimateResult:
    theta_hat: Dict[str, float]
    objective: float
    converged: bool
    evaluations: int
    param_names: Tuple[str, ...]
    at_boundary: Tuple[str, ...] = ()
    message: str = ""

    def to_record(self, seed: Optional[int] = None) -> Dict[str, object]:
        return {
            "theta_hat": dict(self.theta_hat),
            "objective": self.objective,
            "converged": self.converged,
            "evals": self.evaluations,
            "at_boundary": list(self.at_boundary),
            "seed": seed,
        }


def weight_function(cfg: WhittleConfig, lam: ArrayLike) -> ArrayLike:
    """w(lam): 1/(1 + lam^2) or the indicator of low <= |lam| <= high."""
    scalar = np.ndim(lam) == 0
    lam = np.abs(np.asarray(lam, dtype=float))
    if cfg.weight_form is WeightForm.RATIONAL:
        values = 1.0 / (1.0 + lam * lam)
    else:
        lo, hi = cfg.band
        values = ((lam >= lo) & (lam <= hi)).astype(float)
    return float(values) if scalar else values


# ========================================================================
# PARAMETER HANDLING
# ========================================================================

def _as_params(model: SpectralModel, theta: ThetaLike, names: Sequence[str]) -> Dict[str, float]:
    if isinstance(theta, Mapping):
        return {name: float(value) for name, value in theta.items()}
    values = np.atleast_1d(np.asarray(theta, dtype=float))
    if values.size != len(names):
        raise DomainError(f"expected {len(names)} values for {tuple(names)}, got {values.size}")
    return dict(zip(names, values.tolist()))


def _candidate(model: SpectralModel, params: Mapping[str, float]) -> SpectralModel:
    try:
        return with_params(model, **params)
    except DomainError as e:
        raise DomainError(f"invalid parameters {dict(params)}: {e}") from e


def _objective_grid(pg: Periodogram, cfg: WhittleConfig):
    keep = pg.frequencies != 0.0
    lam = pg.frequencies[keep]
    weights = pg.weights()[keep] * weight_function(cfg, lam)
    return lam, pg.ordinates[keep], weights


def _density_on_grid(model: SpectralModel, lam: np.ndarray, params: Mapping[str, float]) -> np.ndarray:
    f = np.asarray(eval_density(model, lam), dtype=float)
    if not np.all(np.isfinite(f) & (f > 0.0)):
        raise DomainError(f"spectral density is not positive on the grid at theta={dict(params)}")
    return f


def _profiled_scale(model: SpectralModel, lam, ordinates, weights) -> float:
    # f = s * h with h the density at unit scale; dU/ds = 0 gives s = sum(w I/h) / sum(w)
    unit = with_params(model, **{scale_param(model): 1.0})
    h = np.asarray(eval_density(unit, lam), dtype=float)
    return float(np.sum(weights * ordinates / h) / np.sum(weights))


def _resolve(pg: Periodogram, model: SpectralModel, theta: ThetaLike,
             cfg: WhittleConfig) -> Tuple[SpectralModel, Dict[str, float]]:
    params = _as_params(model, theta, cfg.search_names(model))
    candidate = _candidate(model, params)
    if cfg.profile_scale and scale_param(model) in cfg.free_names(model):
        lam, ordinates, weights = _objective_grid(pg, cfg)
        scale = _profiled_scale(candidate, lam, ordinates, weights)
        lo, hi = cfg.bounds_for([scale_param(model)])[0]
        params[scale_param(model)] = min(max(scale, lo), hi)
        candidate = _candidate(model, params)
    return candidate, params


# ========================================================================
# OBJECTIVE
# ========================================================================

def whittle_objective_terms(pg: Periodogram, model: SpectralModel, theta: ThetaLike,
                            cfg: WhittleConfig) -> Tuple[float, float]:
    """
    The two parts of the Whittle functional: (log f term, I/f data term).

    Args:
        pg: Periodogram
        model: Template model; its family and fixed parameters are used
        theta: Values of the search parameters, as a mapping or a sequence
            ordered like ``cfg.search_names(model)``
        cfg: Estimator settings

    Raises:
        DomainError: If f is not positive at some grid node, naming theta
    """
    candidate, params = _resolve(pg, model, theta, cfg)
    lam, ordinates, weights = _objective_grid(pg, cfg)
    f = _density_on_grid(candidate, lam, params)
    norm = 1.0 / (4.0 * math.pi)
    return norm * float(np.sum(weights * np.log(f))), norm * float(np.sum(weights * ordinates / f))


def whittle_objective(pg: Periodogram, model: SpectralModel, theta: ThetaLike,
                      cfg: WhittleConfig) -> float:
    """Weighted Whittle functional at theta; see whittle_objective_terms."""
    log_term, data_term = whittle_objective_terms(pg, model, theta, cfg)
    return log_term + data_term


# ========================================================================
# ESTIMATING EQUATIONS
# ========================================================================

class WhittleScore:
    """
    The Whittle smoothing function g(lam) = w(lam) * d(1/f)/d theta_i.

    The derivative is a central difference with step fd_step * (1 + |theta_i|).
    Instances can be passed wherever a smoothing kernel is accepted.
    """

    def __init__(self, model: SpectralModel, cfg: WhittleConfig, component: str):
        if component not in param_names(model):
            raise DomainError(f"unknown parameter '{component}' for {model.family.value}")
        self.model = model
        self.cfg = cfg
        self.component = component
        value = model.params[component]
        self.step = cfg.fd_step * (1.0 + abs(value))
        self._upper = with_params(model, **{component: value + self.step})
        self._lower = with_params(model, **{component: value - self.step})

    @property
    def singular_at_origin(self) -> bool:
        return self.model.singular_at_origin

    def density(self, lam: ArrayLike) -> ArrayLike:
        inv_upper = 1.0 / np.asarray(eval_density(self._upper, lam), dtype=float)
        inv_lower = 1.0 / np.asarray(eval_density(self._lower, lam), dtype=float)
        values = weight_function(self.cfg, lam) * (inv_upper - inv_lower) / (2.0 * self.step)
        return float(values) if np.ndim(lam) == 0 else values


def estimating_equation_residual(pg: Periodogram, model: SpectralModel, theta: ThetaLike,
                                 g: Optional[Union[SpectralWeight, Sequence[SpectralWeight]]] = None,
                                 cfg: Optional[WhittleConfig] = None) -> np.ndarray:
    """
    Residual of the estimating equations, one entry per smoothing function.

    Args:
        pg: Periodogram
        model: Template model
        theta: Parameter values (mapping, or sequence ordered like the free names)
        g: A kernel, a sequence of kernels, or None for the Whittle case in
            which g_i = w d(1/f)/d theta_i for every free parameter
        cfg: Estimator settings (defaults to WhittleConfig())

    Returns:
        Vector of trapezoid sums of (I_T - f) g_i with the zero bin left out
    """
    cfg = cfg or WhittleConfig()
    names = cfg.free_names(model)
    params = _as_params(model, theta, names)
    candidate = _candidate(model, params)

    if g is None:
        weights_list = [WhittleScore(candidate, cfg, name) for name in names]
    elif hasattr(g, "density"):
        weights_list = [g]
    else:
        weights_list = list(g)

    keep = pg.frequencies != 0.0
    lam = pg.frequencies[keep]
    f = _density_on_grid(candidate, lam, params)
    gap = pg.weights()[keep] * (pg.ordinates[keep] - f)
    return np.array([float(np.sum(gap * weight_on_grid(pg, weight)[keep])) for weight in weights_list])


# ========================================================================
# ESTIMATION
# ========================================================================

def _start_point(model: SpectralModel, names, bounds, theta_init: Optional[ThetaLike]) -> np.ndarray:
    if theta_init is None:
        start = [model.params[name] for name in names]
    elif isinstance(theta_init, Mapping):
        start = [float(theta_init.get(name, model.params[name])) for name in names]
    else:
        start = list(np.atleast_1d(np.asarray(theta_init, dtype=float)))
        if len(start) != len(names):
            raise DomainError(f"theta_init needs {len(names)} values for {tuple(names)}")

    x0 = np.array(start, dtype=float)
    for i, (name, (lo, hi)) in enumerate(zip(names, bounds)):
        if not lo <= x0[i] <= hi:
            raise DomainError(f"initial {name}={x0[i]} lies outside bounds [{lo}, {hi}]")
        # A start exactly on a bound collapses the clipped initial simplex
        inset = 1e-3 * (hi - lo)
        if x0[i] == lo:
            x0[i] = lo + inset
        elif x0[i] == hi:
            x0[i] = hi - inset
    return x0


def _minimize(fun, x0, bounds, cfg: WhittleConfig):
    return optimize.minimize(
        fun, x0, method="Nelder-Mead", bounds=bounds,
        options={"xatol": cfg.xatol, "fatol": cfg.fatol,
                 "maxfev": cfg.max_evals, "maxiter": cfg.max_evals},
    )


def _snap_to_bounds(x: np.ndarray, names, bounds, cfg: WhittleConfig):
    x = np.array(x, dtype=float)
    hits = []
    for i, (name, (lo, hi)) in enumerate(zip(names, bounds)):
        x[i] = min(max(x[i], lo), hi)
        tol = 10.0 * cfg.xatol * max(1.0, abs(x[i]))
        if x[i] - lo <= tol:
            x[i] = lo
            hits.append(name)
        elif hi - x[i] <= tol:
            x[i] = hi
            hits.append(name)
    return x, tuple(hits)


def estimate(pg: Periodogram, model: SpectralModel, cfg: WhittleConfig,
             theta_init: Optional[ThetaLike] = None) -> EstimateResult:
    """
    Minimise the Whittle functional over the box bounds with Nelder-Mead.

    Points where the density is invalid count as +inf. The result is
    projected onto the box and parameters sitting on a bound are listed in
    ``at_boundary``. Running out of evaluations yields converged=False.

    Args:
        pg: Periodogram of the observed path
        model: Template model; fixed parameters keep its values
        cfg: Estimator settings
        theta_init: Starting values, defaulting to the template's

    Returns:
        EstimateResult with the full fitted parameter set

    Raises:
        DomainError: If theta_init lies outside the bounds
    """
    names = cfg.search_names(model)
    bounds = cfg.bounds_for(names)

    def fun(x):
        try:
            return whittle_objective(pg, model, x, cfg)
        except DomainError:
            return math.inf

    if not names:
        candidate, _ = _resolve(pg, model, [], cfg)
        value = whittle_objective(pg, model, [], cfg)
        return EstimateResult(theta_hat=candidate.params, objective=value, converged=True,
                              evaluations=1, param_names=cfg.free_names(model), message="profiled only")

    x0 = _start_point(model, names, bounds, theta_init)
    result = _minimize(fun, x0, bounds, cfg)
    x_hat, hits = _snap_to_bounds(result.x, names, bounds, cfg)
    candidate, _ = _resolve(pg, model, x_hat, cfg)
    value = whittle_objective(pg, model, x_hat, cfg)

    converged = bool(result.success) and math.isfinite(value)
    if not converged:
        logger.warning("Whittle estimate did not converge after %d evaluations: %s",
                       result.nfev, result.message)
    logger.debug("Whittle estimate %s objective=%.10g evals=%d", candidate.params, value, result.nfev)
    return EstimateResult(theta_hat=candidate.params, objective=value, converged=converged,
                          evaluations=int(result.nfev), param_names=cfg.free_names(model),
                          at_boundary=hits, message=str(result.message))


def estimate_general(pg: Periodogram, model: SpectralModel, kernels: Sequence[SpectralWeight],
                     cfg: WhittleConfig, theta_init: Optional[ThetaLike] = None) -> EstimateResult:
    """
    General estimator: minimise |residual|^2 of the estimating equations
    with theta-independent smoothing kernels, one per free parameter.
    """
    names = cfg.free_names(model)
    if len(kernels) != len(names):
        raise DomainError(f"need one kernel per free parameter {names}, got {len(kernels)}")
    bounds = cfg.bounds_for(names)

    def fun(x):
        try:
            residual = estimating_equation_residual(pg, model, x, list(kernels), cfg)
        except DomainError:
            return math.inf
        return float(np.dot(residual, residual))

    x0 = _start_point(model, names, bounds, theta_init)
    result = _minimize(fun, x0, bounds, cfg)
    x_hat, hits = _snap_to_bounds(result.x, names, bounds, cfg)
    candidate = _candidate(model, dict(zip(names, x_hat.tolist())))
    value = fun(x_hat)

    converged = bool(result.success) and math.isfinite(value)
    if not converged:
        logger.warning("general estimate did not converge: %s", result.message)
    return EstimateResult(theta_hat=candidate.params, objective=value, converged=converged,
                          evaluations=int(result.nfev), param_names=names,
                          at_boundary=hits, message=str(result.message))


# ========================================================================
# ASYMPTOTIC VARIANCE
# ========================================================================

def asymptotic_variance(model: SpectralModel, g: SpectralWeight,
                        theta: Optional[Mapping[str, float]] = None,
                        convention: str = "frequency") -> float:
    """
    Limiting variance of T^(1/2) (integral of g I_T - integral of g f).

    Args:
        model: The spectral model
        g: Smoothing kernel or Whittle score
        theta: Optional parameter overrides applied to ``model``
        convention: "frequency" gives 4 pi int f^2 g^2, the variance of the
            frequency functional; "time_domain" gives 16 pi^3 int f^2 g^2,
            the variance when the time-domain kernel carries no 1/2pi factor

    Raises:
        NumericalError: If int f^2 g^2 does not converge (divergent tail or pole)
    """
    prefactors = {"frequency": 4.0 * math.pi, "time_domain": 16.0 * math.pi ** 3}
    if convention not in prefactors:
        raise DomainError(f"Unknown variance convention '{convention}', use one of {sorted(prefactors)}")
    if theta:
        model = _candidate(model, theta)

    def integrand(x):
        value = float(eval_density(model, x)) * float(g.density(x))
        return value * value

    total = even_integral_to_infinity(integrand, rel_tol=1e-6, tail_tol=1e-6,
                                      what="integral of f^2 g^2")
    return prefactors[convention] * total
