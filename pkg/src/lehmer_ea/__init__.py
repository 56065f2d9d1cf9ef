"""Lehmer-code and permutation search heuristics with a seeded experiment harness."""

from .algorithms import (
    RunRecord,
    StoppingCondition,
    ea_lehmer_run,
    ea_multivalued_run,
    ea_perm_run,
    poisson_sample,
    rls_run,
)
from .benchmarks import BENCHMARKS, Direction, LexKey, UnsupportedOperation, get_benchmark
from .lehmer import BoundedIntVector, LehmerCode, adjacent_swap_effect, decode, encode
from .perm import Permutation, compose, inversions
from .problems import LopInstance, ParseError, QapInstance, exhaustive_optimum

__all__ = [
    "BENCHMARKS",
    "BoundedIntVector",
    "Direction",
    "LehmerCode",
    "LexKey",
    "LopInstance",
    "ParseError",
    "Permutation",
    "QapInstance",
    "RunRecord",
    "StoppingCondition",
    "UnsupportedOperation",
    "adjacent_swap_effect",
    "compose",
    "decode",
    "ea_lehmer_run",
    "ea_multivalued_run",
    "ea_perm_run",
    "encode",
    "exhaustive_optimum",
    "get_benchmark",
    "inversions",
    "poisson_sample",
    "rls_run",
]
