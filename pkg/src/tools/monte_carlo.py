"""Monte Carlo checks of trend robustness and of the functional CLT.

Every replication draws its clean path from replication_seed(base_seed, i);
the contaminated path adds the trend to that same draw, so differences
between clean and contaminated statistics carry no sampling noise of their
own.
"""
import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats

from ..utils.errors import DomainError, NumericalError
from ..utils.pool import ReplicationPool
from .kernels import SmoothingKernel
from .periodogram import compute_periodogram, smoothed_functional, spectral_functional_limit
from .proof_terms import trend_trend_term
from .simulate import (
    SampledPath,
    SamplingGrid,
    contaminate,
    replication_seed,
    sample_gaussian_path,
)
from .spectral_models import SpectralModel
from .trend import TrendSpec, trend_path
from .whittle import WhittleConfig, asymptotic_variance, estimate

logger = logging.getLogger(__name__)

MIN_DIFFERENCE_REPS = 50
MIN_CLT_REPS = 200
MIN_ROBUSTNESS_REPS = 50


class McReport(BaseModel):
    """Distribution summary of one scalar statistic at one horizon T."""

    statistic: str
    T: float
    n: int
    replications: int = Field(ge=2)
    failures: int = 0
    excluded: int = 0
    base_seed: int
    mean: float
    std: float
    stderr: float
    mean_abs: float
    median_abs: float
    ks_statistic: Optional[float] = None
    ks_pvalue: Optional[float] = None
    extra: Dict[str, float] = Field(default_factory=dict)
    samples: Optional[List[Dict[str, float]]] = Field(default=None, exclude=True)


def _summary(values: Sequence[float]) -> Dict[str, float]:
    # Sorting first makes every sum independent of completion order
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size < 2:
        raise NumericalError(f"only {ordered.size} successful replications, need at least 2")
    std = float(np.std(ordered, ddof=1))
    summary = {
        "mean": float(np.mean(ordered)),
        "std": std,
        "stderr": std / math.sqrt(ordered.size),
        "mean_abs": float(np.mean(np.sort(np.abs(ordered)))),
        "median_abs": float(np.median(np.abs(ordered))),
    }
    if not all(math.isfinite(v) for v in summary.values()):
        raise NumericalError(f"non-finite Monte Carlo statistics: {summary}")
    return summary


def _collect(results: List[Dict[str, float]], label: str):
    good = [r for r in results if "failed" not in r]
    failed = [r for r in results if "failed" in r]
    for r in failed:
        logger.warning("%s replication %d failed: %s", label, r["index"], r["failed"])
    return good, len(failed)


def _check_reps(reps: int, minimum: int, what: str) -> None:
    if reps < minimum:
        raise DomainError(f"{what} needs at least {minimum} replications, got {reps}")


def _draw(model: SpectralModel, grid: SamplingGrid, base_seed: int, index: int) -> SampledPath:
    return sample_gaussian_path(model, grid, replication_seed(base_seed, index))


# ========================================================================
# DIFFERENCE FUNCTIONAL
# ========================================================================

def _difference_task(task) -> Dict[str, float]:
    model, trend, kernel, grid, base_seed, index = task
    try:
        clean = _draw(model, grid, base_seed, index)
    except NumericalError as e:
        return {"index": index, "failed": str(e)}

    dirty = contaminate(clean, trend)
    root_t = math.sqrt(grid.T)
    s = root_t * (smoothed_functional(compute_periodogram(dirty), kernel)
                  - smoothed_functional(compute_periodogram(clean), kernel))
    trend_only = SampledPath(grid=grid, values=trend_path(trend, grid.times))
    s_trend = root_t * smoothed_functional(compute_periodogram(trend_only), kernel)
    return {"index": index, "S": s, "S_trend": s_trend, "S_cross": s - s_trend}


def mc_difference_functional(model: SpectralModel, trend: TrendSpec, kernel: SmoothingKernel,
                             T: float, reps: int, base_seed: int, n: int = 1024,
                             pool: Optional[ReplicationPool] = None) -> McReport:
    """
    Distribution of S = T^(1/2) * [int g I_X - int g I_Y] over paired replications.

    S splits exactly into the trend-only part T^(1/2) int g I_M, which is
    deterministic and close to D(T), and a cross term linear in Y with
    mean zero.

    Args:
        model: Spectral model of Y
        trend: Trend M
        kernel: Smoothing kernel g
        T: Horizon
        reps: Replications, at least 50
        base_seed: Seed from which per-replication seeds are derived
        n: Points per path
        pool: Worker pool, serial by default

    Returns:
        McReport of S, with the decomposition in ``extra``
    """
    _check_reps(reps, MIN_DIFFERENCE_REPS, "difference functional")
    grid = SamplingGrid(T, n)
    pool = pool or ReplicationPool()
    tasks = [(model, trend, kernel, grid, base_seed, i) for i in range(reps)]
    good, failures = _collect(pool.map(_difference_task, tasks), "difference functional")

    summary = _summary([r["S"] for r in good])
    cross = _summary([r["S_cross"] for r in good])
    extra = {
        "mean_S_trend": float(np.mean(np.sort([r["S_trend"] for r in good]))),
        "mean_S_cross": cross["mean"],
        "stderr_S_cross": cross["stderr"],
        "D_T": trend_trend_term(trend, kernel, T),
    }
    logger.info("difference functional at T=%g: mean|S|=%.4g over %d replications",
                T, summary["mean_abs"], len(good))
    return McReport(statistic="S", T=T, n=n, replications=len(good), failures=failures,
                    base_seed=base_seed, extra=extra, samples=good, **summary)


# ========================================================================
# FUNCTIONAL CLT
# ========================================================================

def _clt_task(task) -> Dict[str, float]:
    model, kernel, grid, base_seed, index, target = task
    try:
        clean = _draw(model, grid, base_seed, index)
    except NumericalError as e:
        return {"index": index, "failed": str(e)}
    value = smoothed_functional(compute_periodogram(clean), kernel)
    return {"index": index, "functional": value, "z": math.sqrt(grid.T) * (value - target)}


def mc_clt(model: SpectralModel, kernel: SmoothingKernel, T: float, reps: int, base_seed: int,
           n: int = 4096, pool: Optional[ReplicationPool] = None) -> McReport:
    """
    Compare T^(1/2) [int g I_Y - int g f] with N(0, sigma^2) by a KS test.

    sigma^2 = 4 pi int f^2 g^2 (frequency convention of asymptotic_variance).

    Returns:
        McReport of the standardized statistic with the KS result and, in
        ``extra``, sigma2, the target int g f and the variance ratio
    """
    _check_reps(reps, MIN_CLT_REPS, "CLT check")
    grid = SamplingGrid(T, n)
    target = spectral_functional_limit(model, kernel)
    sigma2 = asymptotic_variance(model, kernel)
    if not sigma2 > 0:
        raise DomainError("CLT check needs a kernel with positive asymptotic variance")

    pool = pool or ReplicationPool()
    tasks = [(model, kernel, grid, base_seed, i, target) for i in range(reps)]
    good, failures = _collect(pool.map(_clt_task, tasks), "CLT")

    z = np.sort([r["z"] for r in good])
    summary = _summary(z)
    ks = stats.kstest(z, "norm", args=(0.0, math.sqrt(sigma2)))
    extra = {
        "sigma2": sigma2,
        "target": target,
        "variance_ratio": summary["std"] ** 2 / sigma2,
        "mean_in_stderr": summary["mean"] / summary["stderr"],
    }
    logger.info("CLT at T=%g: KS p=%.4g, variance ratio %.3f", T, ks.pvalue, extra["variance_ratio"])
    return McReport(statistic="z", T=T, n=n, replications=len(good), failures=failures,
                    base_seed=base_seed, ks_statistic=float(ks.statistic),
                    ks_pvalue=float(ks.pvalue), extra=extra, samples=good, **summary)


# ========================================================================
# ESTIMATOR ROBUSTNESS
# ========================================================================

def _robustness_task(task) -> Dict[str, float]:
    model, trend, cfg, grid, base_seed, index, theta_init = task
    try:
        clean = _draw(model, grid, base_seed, index)
    except NumericalError as e:
        return {"index": index, "failed": str(e)}

    dirty = contaminate(clean, trend)
    fit_clean = estimate(compute_periodogram(clean), model, cfg, theta_init)
    fit_dirty = estimate(compute_periodogram(dirty), model, cfg, theta_init)
    row = {"index": index, "converged": float(fit_clean.converged and fit_dirty.converged)}
    for name in cfg.free_names(model):
        row[f"{name}_Y"] = fit_clean.theta_hat[name]
        row[f"{name}_X"] = fit_dirty.theta_hat[name]
    return row


def mc_estimator_robustness(model: SpectralModel, trend: TrendSpec, cfg: WhittleConfig,
                            T: float, reps: int, base_seed: int, n: int = 1024,
                            pool: Optional[ReplicationPool] = None,
                            theta_init: Optional[Mapping[str, float]] = None) -> McReport:
    """
    Paired Whittle estimates from clean and contaminated periodograms.

    ``model`` carries the true parameters theta*. Both fits start from
    ``theta_init`` (missing entries, or all of them when None, fall back to
    theta*). A start outside the bounds raises DomainError before any
    replication runs. The reported statistic is theta_X - theta_Y for the
    first free parameter; ``extra`` holds, for every free parameter, the median
    |theta_X - theta_Y| and the median absolute errors of both estimates.
    Replications where either fit did not converge are excluded and counted.
    """
    _check_reps(reps, MIN_ROBUSTNESS_REPS, "estimator robustness")
    grid = SamplingGrid(T, n)
    names = cfg.free_names(model)
    truth = model.params

    pool = pool or ReplicationPool()
    search = cfg.search_names(model)
    for name, (lo, hi) in zip(search, cfg.bounds_for(search)):
        start = (theta_init or {}).get(name, truth[name])
        if not lo <= start <= hi:
            raise DomainError(f"initial {name}={start} lies outside bounds [{lo}, {hi}]")

    tasks = [(model, trend, cfg, grid, base_seed, i, theta_init) for i in range(reps)]
    good, failures = _collect(pool.map(_robustness_task, tasks), "estimator robustness")
    converged = [r for r in good if r["converged"]]
    excluded = len(good) - len(converged)
    if excluded:
        logger.warning("excluded %d non-converged replications at T=%g", excluded, T)

    extra = {}
    for name in names:
        clean = np.array([r[f"{name}_Y"] for r in converged])
        dirty = np.array([r[f"{name}_X"] for r in converged])
        extra[f"{name}_median_abs_diff"] = float(np.median(np.abs(dirty - clean)))
        extra[f"{name}_median_abs_err_Y"] = float(np.median(np.abs(clean - truth[name])))
        extra[f"{name}_median_abs_err_X"] = float(np.median(np.abs(dirty - truth[name])))

    primary = names[0]
    summary = _summary([r[f"{primary}_X"] - r[f"{primary}_Y"] for r in converged])
    logger.info("estimator robustness at T=%g: median|%s_X - %s_Y|=%.4g", T, primary, primary,
                summary["median_abs"])
    return McReport(statistic=f"{primary}_X - {primary}_Y", T=T, n=n, replications=len(converged),
                    failures=failures, excluded=excluded, base_seed=base_seed, extra=extra,
                    samples=good, **summary)
