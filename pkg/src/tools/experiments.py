"""Experiment runners behind the command-line subcommands.

Each runner takes a validated ExperimentConfig, writes its CSV and SVG
artifacts into the output directory and returns the JSON report document
(which the caller writes as report.json).
"""
import logging
import math
from pathlib import Path
from typing import Dict, List

import numpy as np

from ..utils.config import ExperimentConfig
from ..utils.errors import LabError
from ..utils.pool import ReplicationPool
from ..utils.reports import ensure_dir, write_csv, write_svg_plot
from .conditions import check_conditions
from .kernels import verify_kernel_decay
from .monte_carlo import mc_clt, mc_difference_functional, mc_estimator_robustness
from .periodogram import (
    compute_periodogram,
    export_periodogram_csv,
    quadratic_form_functional,
    smoothed_functional,
    spectral_functional_limit,
    synthetic_periodogram,
)
from .proof_terms import ladder_summary, nu_bound_check, trend_trend_term, variance_bound_term
from .simulate import SamplingGrid, contaminate, export_path_csv, replication_seed, sample_gaussian_path
from .spectral_models import classify_memory, density_integral
from .trend import TrendForm, verify_bound
from .whittle import estimate, estimating_equation_residual

logger = logging.getLogger(__name__)


def _tag(T: float) -> str:
    return f"T{T:g}"


def _document(subcommand: str, cfg: ExperimentConfig, results: Dict[str, object],
              artifacts: List[Path]) -> Dict[str, object]:
    return {
        "subcommand": subcommand,
        "config": cfg.resolved(),
        "results": results,
        "artifacts": sorted(p.name for p in artifacts),
    }


# ========================================================================
# SIMULATE
# ========================================================================

def run_simulate(cfg: ExperimentConfig) -> Dict[str, object]:
    """
    Simulate clean and contaminated paths for every T on the ladder.

    Returns:
        Report document with per-path seeds and sample moments
    """
    try:
        out = ensure_dir(Path(cfg.output_dir))
        model, trend = cfg.spectral_model, cfg.trend_spec
        artifacts, rows = [], []

        for T in cfg.grid.T_ladder:
            grid = SamplingGrid(T, cfg.grid.n)
            for index in range(cfg.paths):
                seed = replication_seed(cfg.base_seed, index)
                clean = sample_gaussian_path(model, grid, seed)
                dirty = contaminate(clean, trend)
                stem = f"path_{_tag(T)}_rep{index}"
                artifacts.append(export_path_csv(clean, out / f"{stem}_clean.csv"))
                artifacts.append(export_path_csv(dirty, out / f"{stem}_contaminated.csv"))
                rows.append({"T": T, "replication": index, "seed": seed,
                             "sample_variance": float(np.var(clean.values)),
                             "contaminated_mean": float(np.mean(dirty.values))})

        variances = [float(np.mean([r["sample_variance"] for r in rows if r["T"] == T]))
                     for T in cfg.grid.T_ladder]
        artifacts.append(write_csv(rows, out / "paths.csv"))
        if len(cfg.grid.T_ladder) > 1:
            artifacts.append(write_svg_plot(
                {"sample variance": (cfg.grid.T_ladder, variances),
                 "r(0)": (cfg.grid.T_ladder, [density_integral(model)] * len(variances))},
                out / "variance.svg", "Sample variance of simulated paths", "variance"))
        return _document("simulate", cfg, {"paths": rows, "r0": density_integral(model)}, artifacts)
    except LabError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to simulate paths: {str(e)}") from e


# ========================================================================
# PERIODOGRAM
# ========================================================================

def run_periodogram(cfg: ExperimentConfig) -> Dict[str, object]:
    """
    Periodograms of one clean path per T, with the frequency and time-domain
    functionals side by side and the Parseval check.
    """
    try:
        out = ensure_dir(Path(cfg.output_dir))
        model, kernel = cfg.spectral_model, cfg.smoothing_kernel
        seed = replication_seed(cfg.base_seed, 0)
        artifacts, rows = [], []

        for T in cfg.grid.T_ladder:
            path = sample_gaussian_path(model, SamplingGrid(T, cfg.grid.n), seed)
            pg = compute_periodogram(path, pad=cfg.grid.pad)
            artifacts.append(export_periodogram_csv(pg, out / f"periodogram_{_tag(T)}.csv"))

            energy = float(np.sum(pg.weights() * pg.ordinates))
            mean_square = path.grid.delta * float(np.sum(path.values ** 2)) / T
            frequency = smoothed_functional(pg, kernel)
            time_domain = quadratic_form_functional(path, kernel)
            rows.append({
                "T": T,
                "seed": seed,
                "parseval_rel_error": abs(energy - mean_square) / mean_square,
                "smoothed_functional": frequency,
                "quadratic_form_functional": time_domain,
                "duality_rel_gap": abs(frequency - time_domain) / max(abs(time_domain), 1e-9),
            })

        limit = spectral_functional_limit(model, kernel)
        artifacts.append(write_csv(rows, out / "functionals.csv"))
        if len(rows) > 1:
            artifacts.append(write_svg_plot(
                {"frequency": (cfg.grid.T_ladder, [r["smoothed_functional"] for r in rows]),
                 "time domain": (cfg.grid.T_ladder, [r["quadratic_form_functional"] for r in rows]),
                 "limit": (cfg.grid.T_ladder, [limit] * len(rows))},
                out / "functionals.svg", "Smoothed spectral functional", "value"))
        return _document("periodogram", cfg, {"ladder": rows, "limit": limit}, artifacts)
    except LabError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to compute periodograms: {str(e)}") from e


# ========================================================================
# ESTIMATE
# ========================================================================

def run_estimate(cfg: ExperimentConfig) -> Dict[str, object]:
    """
    Whittle estimates from the clean and contaminated periodogram of one path
    per T, plus a noise-free recovery check on the largest T.
    """
    try:
        out = ensure_dir(Path(cfg.output_dir))
        model, trend, whittle = cfg.spectral_model, cfg.trend_spec, cfg.whittle_config
        seed = replication_seed(cfg.base_seed, 0)
        artifacts, rows, records = [], [], []

        for T in cfg.grid.T_ladder:
            clean = sample_gaussian_path(model, SamplingGrid(T, cfg.grid.n), seed)
            for label, path in (("clean", clean), ("contaminated", contaminate(clean, trend))):
                pg = compute_periodogram(path, pad=cfg.grid.pad)
                fit = estimate(pg, model, whittle, cfg.theta_init)
                residual = estimating_equation_residual(pg, model, fit.theta_hat, cfg=whittle)
                record = fit.to_record(seed)
                record.update({"T": T, "path": label,
                               "residual_norm": float(np.linalg.norm(residual))})
                records.append(record)
                rows.append({"T": T, "path": label, "converged": fit.converged,
                             "objective": fit.objective, "evals": fit.evaluations,
                             **{f"hat_{k}": v for k, v in fit.theta_hat.items()}})

        largest = SamplingGrid(cfg.grid.T_ladder[-1], cfg.grid.n)
        recovery = estimate(synthetic_periodogram(model, largest, cfg.grid.pad), model, whittle,
                            cfg.theta_init)

        artifacts.append(write_csv(rows, out / "estimates.csv"))
        primary = whittle.free_names(model)[0]
        if len(cfg.grid.T_ladder) > 1:
            series = {label: (cfg.grid.T_ladder,
                              [r[f"hat_{primary}"] for r in rows if r["path"] == label])
                      for label in ("clean", "contaminated")}
            series["truth"] = (cfg.grid.T_ladder, [model.params[primary]] * len(cfg.grid.T_ladder))
            artifacts.append(write_svg_plot(series, out / "estimates.svg",
                                            f"Whittle estimate of {primary}", primary))
        results = {"estimates": records, "noise_free_recovery": recovery.to_record(),
                   "truth": model.params}
        return _document("estimate", cfg, results, artifacts)
    except LabError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to run Whittle estimation: {str(e)}") from e


# ========================================================================
# CHECK CONDITIONS
# ========================================================================

def run_check_conditions(cfg: ExperimentConfig) -> Dict[str, object]:
    """
    Evaluate the robustness conditions for the configured model, trend and
    kernel, or for explicit exponents given under ``conditions``.
    """
    try:
        model, trend, kernel = cfg.spectral_model, cfg.trend_spec, cfg.smoothing_kernel
        overrides = cfg.conditions
        report = check_conditions(
            alpha=overrides.alpha if overrides.alpha is not None else model.alpha_decay,
            beta=overrides.beta if overrides.beta is not None else trend.beta,
            gamma=overrides.gamma if overrides.gamma is not None else kernel.decay,
            memory=overrides.memory if overrides.memory is not None else classify_memory(model),
            variant=overrides.variant,
        )
        decay = verify_kernel_decay(kernel)
        bound = verify_bound(trend, np.geomspace(0.1, 1e3, 200))
        results = {
            "conditions": report.model_dump(mode="json"),
            "kernel_decay": {"holds": decay.holds, "exponent": decay.exponent,
                             "fitted_C": decay.fitted_C, "tail_slope": decay.tail_slope},
            "trend_bound": {"holds": bound.holds, "max_ratio": bound.max_ratio},
        }
        return _document("check-conditions", cfg, results, [])
    except LabError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to check conditions: {str(e)}") from e


# ========================================================================
# ROBUSTNESS
# ========================================================================

def run_robustness(cfg: ExperimentConfig) -> Dict[str, object]:
    """
    Deterministic terms D(T), J(T)/T and the Monte Carlo difference and
    estimator experiments along the T ladder.
    """
    try:
        out = ensure_dir(Path(cfg.output_dir))
        model, trend, kernel = cfg.spectral_model, cfg.trend_spec, cfg.smoothing_kernel
        ladder = cfg.grid.T_ladder
        pool = ReplicationPool(cfg.workers)
        artifacts, rows, reports = [], [], []

        for T in ladder:
            logger.info("robustness ladder step T=%g", T)
            d_value = trend_trend_term(trend, kernel, T, points=cfg.d_points)
            d_abs = trend_trend_term(trend, kernel, T, points=cfg.d_points, absolute=True)
            j_value = variance_bound_term(trend, kernel, model, T, nodes=cfg.j_nodes)
            difference = mc_difference_functional(model, trend, kernel, T, cfg.replications,
                                                   cfg.base_seed, n=cfg.grid.n, pool=pool)
            estimator = mc_estimator_robustness(model, trend, cfg.whittle_config, T,
                                                cfg.estimator_replications, cfg.base_seed,
                                                n=cfg.grid.n, pool=pool, theta_init=cfg.theta_init)
            artifacts.append(write_csv(difference.samples, out / f"difference_samples_{_tag(T)}.csv"))
            artifacts.append(write_csv(estimator.samples, out / f"estimator_samples_{_tag(T)}.csv"))

            rows.append({
                "T": T,
                "D": d_value,
                "D_abs": d_abs,
                "J": j_value.J,
                "J_over_T": j_value.J_over_T,
                "mean_abs_S": difference.mean_abs,
                "mean_S": difference.mean,
                "mean_S_cross": difference.extra["mean_S_cross"],
                "median_abs_estimate_diff": estimator.median_abs,
            })
            reports.append({"T": T,
                            "difference": difference.model_dump(mode="json"),
                            "estimator": estimator.model_dump(mode="json")})

        columns = ("D", "J_over_T", "mean_abs_S", "median_abs_estimate_diff")
        summaries = {name: ladder_summary(ladder, [r[name] for r in rows]) for name in columns}
        if trend.form is not TrendForm.ZERO and len(ladder) > 1:
            check = nu_bound_check(trend, kernel, ladder[0], ladder[-1])
            summaries["nu_bound"] = {"holds": check.holds, "fitted_C": check.fitted_C,
                                     "check_C": check.check_C}

        artifacts.append(write_csv(rows, out / "robustness.csv"))
        if len(ladder) > 1:
            artifacts.append(write_svg_plot(
                {name: (ladder, [r[name] for r in rows]) for name in columns},
                out / "robustness.svg", "Trend effect along the T ladder", "statistic"))
        results = {"ladder": rows, "reports": reports, "rates": summaries}
        return _document("robustness", cfg, results, artifacts)
    except LabError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to run robustness experiment: {str(e)}") from e


# ========================================================================
# CLT
# ========================================================================

def run_clt(cfg: ExperimentConfig) -> Dict[str, object]:
    """Monte Carlo CLT check of the smoothed functional for every T on the ladder."""
    try:
        out = ensure_dir(Path(cfg.output_dir))
        model, kernel = cfg.spectral_model, cfg.smoothing_kernel
        ladder = cfg.grid.T_ladder
        pool = ReplicationPool(cfg.workers)
        artifacts, rows, reports = [], [], []

        for T in ladder:
            logger.info("CLT ladder step T=%g", T)
            report = mc_clt(model, kernel, T, cfg.clt_replications, cfg.base_seed,
                            n=cfg.grid.clt_n, pool=pool)
            artifacts.append(write_csv(report.samples, out / f"clt_samples_{_tag(T)}.csv"))
            rows.append({"T": T, "ks_statistic": report.ks_statistic, "ks_pvalue": report.ks_pvalue,
                         "variance_ratio": report.extra["variance_ratio"],
                         "mean_in_stderr": report.extra["mean_in_stderr"]})
            reports.append(report.model_dump(mode="json"))

        artifacts.append(write_csv(rows, out / "clt.csv"))
        if len(ladder) > 1:
            artifacts.append(write_svg_plot(
                {"variance ratio": (ladder, [r["variance_ratio"] for r in rows]),
                 "KS p-value": (ladder, [r["ks_pvalue"] for r in rows])},
                out / "clt.svg", "Functional CLT diagnostics", "value"))
        sigma2 = reports[0]["extra"]["sigma2"] if reports else math.nan
        return _document("clt", cfg, {"ladder": rows, "reports": reports, "sigma2": sigma2}, artifacts)
    except LabError:
        raise
    except Exception as e:
        raise RuntimeError(f"Failed to run CLT experiment: {str(e)}") from e
