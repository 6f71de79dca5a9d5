"""Python access to the nonlocal MEMS solvers."""

import json

from ._mems import (
    Domain,
    MemsError,
    evolve,
    experiments,
    minimal_solution,
    picard_existence_horizon,
    principal_eigenpair,
    pull_in_voltage,
    solve_nonlocal_steady,
    thresholds,
)
from ._mems import run_experiment as _run_experiment

__all__ = [
    "Domain",
    "MemsError",
    "evolve",
    "experiments",
    "minimal_solution",
    "picard_existence_horizon",
    "principal_eigenpair",
    "pull_in_voltage",
    "run_experiment",
    "solve_nonlocal_steady",
    "thresholds",
]


def run_experiment(experiment, config="", overrides=(), out_dir="."):
    """Run one experiment in process and return the record as a dict."""
    return json.loads(_run_experiment(experiment, config, list(overrides), out_dir))
