"""Weighted Ranking under random arrivals.

Thin wrappers over the compiled ``_core`` module. Structured values (instances,
rank assignments, reports) are plain dicts in the JSON formats the CLI uses.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    GainSpec,
    Instance,
    ThresholdStructureError,
    ValidationError,
    brute_force_opt,
    improved_bound,
    load_gain,
    minimize_bound,
    simple_bound,
    solve_opt,
    tau_star,
    tau_zero,
)

__all__ = [
    "ConfigError",
    "GainSpec",
    "Instance",
    "ThresholdStructureError",
    "ValidationError",
    "brute_force_opt",
    "compute_thresholds",
    "conclusion_integral",
    "generate_instance",
    "improved_bound",
    "instance",
    "load_gain",
    "minimize_bound",
    "pair_gain",
    "property_suite",
    "ratio_experiment",
    "run_ranking",
    "sample_ranks",
    "simple_bound",
    "solve_opt",
    "tau_star",
    "tau_zero",
]


def instance(data):
    """Builds an Instance from the instance dict format."""
    return Instance.from_json(json.dumps(data))


def generate_instance(kind, n, m=0, p=0.5, seed=1):
    return _core.generate_instance(kind, n, m, p, seed)


def sample_ranks(inst, seed):
    return json.loads(_core.sample_ranks(inst, seed))


def run_ranking(inst, spec, ranks):
    """Returns {"pairs", "total_weight", "duals"} for one rank assignment."""
    return json.loads(_core.run_ranking(inst, spec, json.dumps(ranks)))


def pair_gain(inst, spec, ranks, u, v, grid=200):
    return json.loads(_core.pair_gain(inst, spec, json.dumps(ranks), u, v, grid))


def compute_thresholds(inst, spec, ranks, u, v, grid=50):
    return json.loads(_core.compute_thresholds(inst, spec, json.dumps(ranks), u, v, grid))


def conclusion_integral(spec, profiles):
    return _core.conclusion_integral(spec, json.dumps(profiles))


def ratio_experiment(inst, spec, trials, seed=1):
    return json.loads(_core.ratio_experiment(inst, spec, trials, seed))


def property_suite(trials=100, seed=1, inject_bug=False):
    return json.loads(_core.property_suite(trials, seed, inject_bug))
