#!/usr/bin/env python3
"""Whittle Robustness Lab.

Command-line runner for Whittle-type spectral estimation experiments on
continuous-time stationary processes and for checks that a small
deterministic trend leaves smoothed periodogram asymptotics unchanged.

Usage:
    whittle-robustness-lab <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--workers <n>]
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

import yaml
from pydantic import ValidationError

from src.utils.config import ExperimentConfig, load_config
from src.utils.errors import DomainError, NumericalError, UsageError
from src.utils.reports import ensure_dir, write_json

# --- Import experiment implementations ---

from src.tools.experiments import (
    run_check_conditions as conditions_run,
    run_clt as clt_run,
    run_estimate as estimate_run,
    run_periodogram as periodogram_run,
    run_robustness as robustness_run,
    run_simulate as simulate_run,
)

logger = logging.getLogger("whittle_lab")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

LOG_LEVEL_ENV = "WHITTLE_LAB_LOG_LEVEL"

COMMANDS: Dict[str, Callable[[ExperimentConfig], Dict[str, object]]] = {}
COMMAND_HELP: Dict[str, str] = {}


def command(name: str):
    """Register a subcommand; the docstring's first line becomes its help text."""
    def register(func):
        COMMANDS[name] = func
        COMMAND_HELP[name] = (func.__doc__ or "").strip().splitlines()[0]
        return func
    return register


# ========================================================================
# DATA GENERATION
# ========================================================================

@command("simulate")
def simulate(cfg: ExperimentConfig):
    """Simulate clean and contaminated Gaussian paths and export them as CSV.
    One set of paths per T on the ladder, seeds derived from the base seed."""
    return simulate_run(cfg)


@command("periodogram")
def periodogram(cfg: ExperimentConfig):
    """Compute continuous periodograms and smoothed spectral functionals.
    Reports the frequency/time-domain agreement and the Parseval check."""
    return periodogram_run(cfg)


# ========================================================================
# ESTIMATION
# ========================================================================

@command("estimate")
def estimate(cfg: ExperimentConfig):
    """Run the weighted Whittle estimator on clean and contaminated periodograms.
    Includes a noise-free recovery check."""
    return estimate_run(cfg)


# ========================================================================
# ROBUSTNESS
# ========================================================================

@command("check-conditions")
def check_conditions(cfg: ExperimentConfig):
    """Evaluate the decay conditions under which the trend is negligible.
    Exponents come from the configured model, trend and kernel unless overridden."""
    return conditions_run(cfg)


@command("robustness")
def robustness(cfg: ExperimentConfig):
    """Run D(T), J(T)/T and the paired Monte Carlo experiments along the T ladder.
    Writes per-replication samples as CSV and a ladder plot."""
    return robustness_run(cfg)


@command("clt")
def clt(cfg: ExperimentConfig):
    """Compare the standardized smoothed functional with its normal limit.
    Kolmogorov-Smirnov test against N(0, sigma^2) for every T."""
    return clt_run(cfg)


# ========================================================================
# ENTRY POINT
# ========================================================================

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="whittle-robustness-lab", description=__doc__.splitlines()[0])
    subparsers = parser.add_subparsers(dest="subcommand", metavar="subcommand", required=True)
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=COMMAND_HELP[name], description=COMMAND_HELP[name])
        sub.add_argument("--config", required=True, help="experiment config file (YAML or JSON)")
        sub.add_argument("--out", help="output directory, overrides output_dir")
        sub.add_argument("--seed", type=int, help="base seed, overrides base_seed")
        sub.add_argument("--workers", type=int, help="worker processes, overrides workers")
        sub.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def _configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else os.environ.get(LOG_LEVEL_ENV, "INFO").upper()
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def run(subcommand: str, config_path: Optional[str] = None, out: Optional[str] = None,
        seed: Optional[int] = None, workers: Optional[int] = None) -> int:
    """
    Run one subcommand and write report.json into the output directory.

    Returns:
        Exit status: 0 success, 1 usage error, 2 validation error, 3 numerical error
    """
    if subcommand not in COMMANDS:
        logger.error("unknown subcommand '%s'; choose from %s", subcommand, sorted(COMMANDS))
        return EXIT_USAGE

    try:
        cfg = load_config(config_path).with_overrides(out=out, seed=seed, workers=workers)
        document = COMMANDS[subcommand](cfg)
        write_json(document, ensure_dir(Path(cfg.output_dir)) / "report.json")
    except (ValidationError, DomainError, UsageError, yaml.YAMLError, json.JSONDecodeError,
            ValueError, OSError) as e:
        logger.error("validation error: %s", e)
        return EXIT_VALIDATION
    except NumericalError as e:
        logger.error("numerical error: %s", e)
        return EXIT_NUMERICAL
    except RuntimeError as e:
        logger.exception("experiment failed: %s", e)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the command-line runner."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    logger.info("running %s", args.subcommand)
    return run(args.subcommand, args.config, args.out, args.seed, args.workers)


if __name__ == "__main__":
    sys.exit(main())
