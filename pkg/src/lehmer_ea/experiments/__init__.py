"""Experiment configs, runners, metrics, closed forms and rank statistics."""

from .config import ExperimentConfig, load_configs, run_seed
from .metrics import ert, rpd
from .runner import AggregateResult, run_fixed_budget, run_fixed_target, run_suite
from .stats import wilcoxon_bh
from .theory import (
    closed_form,
    harmonic_number,
    random_walk_hitting_check,
    rls_onemax_uniform_expectation,
    validate_theorem,
)

__all__ = [
    "AggregateResult",
    "ExperimentConfig",
    "closed_form",
    "ert",
    "harmonic_number",
    "load_configs",
    "random_walk_hitting_check",
    "rls_onemax_uniform_expectation",
    "rpd",
    "run_fixed_budget",
    "run_fixed_target",
    "run_suite",
    "run_seed",
    "validate_theorem",
    "wilcoxon_bh",
]
