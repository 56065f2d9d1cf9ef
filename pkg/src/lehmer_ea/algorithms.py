"""Reference implementations of RLS and the (1+1)-EA variants.

These work on any Python objective and are the semantic reference for the
compiled kernels in :mod:`lehmer_ea.kernels`. All runs are elitist: an
offspring replaces the parent when it is not worse. The initial sample is
evaluation 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .benchmarks import Direction, FitnessValue
from .lehmer import (
    BoundedIntVector,
    LehmerCode,
    get_step,
    probability_vector,
    sample_uniform_code,
    step_uniform,
)
from .perm import Permutation, mutate_permutation, sample_uniform_permutation


@dataclass(frozen=True)
class StoppingCondition:
    budget: int
    target: Optional[FitnessValue] = None

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be >= 1")


@dataclass
class RunRecord:
    seed: int
    evaluations_used: int
    best_fitness: FitnessValue
    success: bool
    trajectory: Optional[list[tuple[int, FitnessValue]]] = None
    solution: object = field(default=None, repr=False, compare=False)

    @property
    def optimization_time(self) -> int:
        """Evaluations after the initial sample (0 when it was already optimal)."""
        return self.evaluations_used - 1


def reached(value: FitnessValue, target: Optional[FitnessValue], direction: Direction) -> bool:
    return target is not None and direction.not_worse(value, target)


def poisson_sample(rng: np.random.Generator) -> int:
    """Draw from Poi(1) by sequential search over the CDF."""
    u = rng.random()
    k = 0
    p = math.exp(-1.0)
    cdf = p
    while u > cdf and p > 0.0:
        k += 1
        p /= k
        cdf += p
    return k


def _elitist(
    objective: Callable,
    direction: Direction,
    x,
    mutate: Callable,
    stop: StoppingCondition,
    seed: int,
    count_noop_evals: bool,
    record_trajectory: bool,
) -> RunRecord:
    f = objective(x)
    evals = 1
    traj = [(1, f)] if record_trajectory else None
    success = reached(f, stop.target, direction)
    while evals < stop.budget and not success:
        y = mutate(x)
        if y == x and not count_noop_evals:
            continue
        evals += 1
        fy = objective(y)
        if direction.not_worse(fy, f):
            if traj is not None and direction.better(fy, f):
                traj.append((evals, fy))
            x, f = y, fy
            success = reached(f, stop.target, direction)
    return RunRecord(seed, evals, f, success, traj, x)


def rls_run(
    objective: Callable[[LehmerCode], FitnessValue],
    n: int,
    direction: Direction,
    step: str = "uniform",
    prob_vector: str = "uniform",
    stop: StoppingCondition = StoppingCondition(10**6),
    seed: int = 0,
    initial: Optional[LehmerCode] = None,
    count_noop_evals: bool = True,
    record_trajectory: bool = False,
) -> RunRecord:
    """RLS in L_n: step exactly one label per iteration, chosen by ``prob_vector``."""
    if n < 2:
        raise ValueError("RLS on L_n needs n >= 2")
    rng = np.random.default_rng(seed)
    step_fn = get_step(step)
    p = probability_vector(prob_vector, n)
    x0 = initial if initial is not None else sample_uniform_code(n, rng)

    def mutate(x: LehmerCode) -> LehmerCode:
        label = int(rng.choice(n - 1, p=p)) + 2
        k = n - label
        ent = list(x.entries)
        ent[k] = step_fn(label, ent[k], rng)
        return LehmerCode._trusted(n, tuple(ent))

    return _elitist(objective, direction, x0, mutate, stop, seed, count_noop_evals, record_trajectory)


def ea_lehmer_run(
    objective: Callable[[LehmerCode], FitnessValue],
    n: int,
    direction: Direction,
    step: str = "uniform",
    stop: StoppingCondition = StoppingCondition(10**6),
    seed: int = 0,
    initial: Optional[LehmerCode] = None,
    count_noop_evals: bool = True,
    record_trajectory: bool = False,
) -> RunRecord:
    """(1+1)-EA in L_n: every label is stepped independently with rate 1/(n-1)."""
    if n < 2:
        raise ValueError("the Lehmer (1+1)-EA needs n >= 2")
    rng = np.random.default_rng(seed)
    step_fn = get_step(step)
    rate = 1.0 / (n - 1)
    x0 = initial if initial is not None else sample_uniform_code(n, rng)

    def mutate(x: LehmerCode) -> LehmerCode:
        hit = np.flatnonzero(rng.random(n - 1) < rate)
        if hit.size == 0:
            return x
        ent = list(x.entries)
        for k in hit:
            ent[k] = step_fn(n - int(k), ent[k], rng)
        return LehmerCode._trusted(n, tuple(ent))

    return _elitist(objective, direction, x0, mutate, stop, seed, count_noop_evals, record_trajectory)


def ea_perm_run(
    objective: Callable[[Permutation], FitnessValue],
    n: int,
    direction: Direction,
    scheme: str = "insertion",
    stop: StoppingCondition = StoppingCondition(10**6),
    seed: int = 0,
    count_noop_evals: bool = True,
    poisson_offset: int = 0,
    initial: Optional[Permutation] = None,
    record_trajectory: bool = False,
) -> RunRecord:
    """Permutation (1+1)-EA applying k ~ Poi(1) + poisson_offset elementary moves.

    With ``count_noop_evals=False`` an offspring identical to its parent is
    neither evaluated nor charged to the budget.
    """
    if n < 2:
        raise ValueError("the permutation (1+1)-EA needs n >= 2")
    rng = np.random.default_rng(seed)
    x0 = initial if initial is not None else sample_uniform_permutation(n, rng)

    def mutate(x: Permutation) -> Permutation:
        k = poisson_sample(rng) + poisson_offset
        return mutate_permutation(x, scheme, k, rng)

    return _elitist(objective, direction, x0, mutate, stop, seed, count_noop_evals, record_trajectory)


def ea_multivalued_run(
    objective: Callable[[BoundedIntVector], FitnessValue],
    n: int,
    direction: Direction,
    stop: StoppingCondition = StoppingCondition(10**6),
    seed: int = 0,
    initial: Optional[BoundedIntVector] = None,
    record_trajectory: bool = False,
) -> RunRecord:
    """(1+1)-EA on [n]^n: each position resampled uniformly (excluding its value) w.p. 1/n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    x0 = initial if initial is not None else BoundedIntVector(n, rng.integers(0, n, size=n))

    def mutate(x: BoundedIntVector) -> BoundedIntVector:
        if n == 1:
            return x
        hit = np.flatnonzero(rng.random(n) < 1.0 / n)
        if hit.size == 0:
            return x
        ent = list(x.entries)
        for k in hit:
            ent[k] = step_uniform(n, ent[k], rng)
        return BoundedIntVector(n, ent)

    return _elitist(objective, direction, x0, mutate, stop, seed, True, record_trajectory)
