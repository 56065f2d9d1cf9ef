"""Fixed-target and fixed-budget experiment runners.

A run is fully determined by its config and its seed, which is derived from
``(master_seed, run_index)``; runs can therefore be executed in any order or
in parallel without changing any result.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .. import kernels as K
from ..algorithms import (
    RunRecord,
    StoppingCondition,
    ea_lehmer_run,
    ea_multivalued_run,
    ea_perm_run,
    rls_run,
)
from ..benchmarks import Direction, LexKey, UnsupportedOperation, get_benchmark
from ..lehmer import BoundedIntVector, LehmerCode, decode, encode, probability_vector
from ..perm import Permutation
from ..problems import Instance, LopInstance, evaluate, exhaustive_optimum, load_instance, subsample
from .config import ExperimentConfig, run_seed
from .metrics import ert, mean_or_none, rpd, runtime_summary

log = logging.getLogger(__name__)

CSV_FIELDS = ("config_hash", "seed", "evaluations_used", "best_fitness", "success")

_STEP_IDS = {"uniform": K.STEP_UNIFORM, "unit": K.STEP_UNIT, "harmonic": K.STEP_HARMONIC}
_SCHEME_IDS = {
    "transposition": K.SCHEME_TRANSPOSITION,
    "adjacent-swap": K.SCHEME_ADJACENT,
    "insertion": K.SCHEME_INSERTION,
}
_BENCH_IDS = {
    "l-onemax": K.OBJ_ONEMAX,
    "l-leadingzeros": K.OBJ_LZ,
    "facval": K.OBJ_FACVAL,
    "inv": K.OBJ_INV,
    "pleadingones": K.OBJ_PLO,
    "lexval": K.OBJ_LEXVAL,
    "nval": K.OBJ_NVAL,
}
_SPACE = {"rls": "lehmer", "ea-lehmer": "lehmer", "ea-perm": "perm", "ea-vector": "vector"}
_NO_DATA = np.zeros((1, 1), dtype=np.int64)
_NO_INIT = np.empty(0, dtype=np.int64)
_NO_FLOAT = np.empty(0, dtype=float)


@dataclass
class Task:
    """A resolved objective in the algorithm's search space."""

    n: int
    space: str
    direction: Direction
    func: Callable
    kernel_obj: Optional[int]
    A: np.ndarray = field(default_factory=lambda: _NO_DATA)
    B: np.ndarray = field(default_factory=lambda: _NO_DATA)
    instance_key: str = ""


def resolve_instance(cfg: ExperimentConfig) -> Instance:
    inst = load_instance(cfg.instance, cfg.problem)
    if cfg.subsample is not None:
        inst = subsample(inst, cfg.subsample, np.random.default_rng(cfg.subsample_seed))
    return inst


def build_task(cfg: ExperimentConfig, inst: Optional[Instance] = None) -> Task:
    space = _SPACE[cfg.algorithm]
    if cfg.benchmark is not None:
        bench = get_benchmark(cfg.benchmark)
        key = f"benchmark:{bench.name}:n={cfg.n}"
        if space == "vector" or bench.space == "vector":
            if space != bench.space:
                raise ValueError("NVal lives on [n]^n and pairs only with algorithm 'ea-vector'")
            return Task(cfg.n, space, bench.direction, bench.func, K.OBJ_NVAL, instance_key=key)
        func = bench.func
        if space == "lehmer" and bench.space == "perm":
            func = lambda code, f=bench.func: f(decode(code))  # noqa: E731
        elif space == "perm" and bench.space == "lehmer":
            func = lambda sigma, f=bench.func: f(encode(sigma))  # noqa: E731
        obj = _BENCH_IDS[bench.name]
        native = K.LEHMER_OBJECTIVES if space == "lehmer" else K.PERM_OBJECTIVES
        return Task(
            cfg.n, space, bench.direction, func, obj if obj in native else None, instance_key=key
        )

    if space == "vector":
        raise ValueError("instance problems need a Lehmer or permutation algorithm")
    if inst is None:
        inst = resolve_instance(cfg)
    if cfg.n is not None and cfg.n != inst.n:
        raise ValueError(f"config n={cfg.n} does not match instance size {inst.n}")
    if space == "lehmer":
        func = lambda code, i=inst: evaluate(i, decode(code))  # noqa: E731
    else:
        func = lambda sigma, i=inst: evaluate(i, sigma)  # noqa: E731
    if isinstance(inst, LopInstance):
        obj, A, B = K.OBJ_LOP, inst.B, inst.B
    else:
        obj, A, B = K.OBJ_QAP, inst.A, inst.B
    if not inst.int64_safe:
        obj = None
    key = f"{cfg.problem}:{cfg.instance}:sub={cfg.subsample}:{cfg.subsample_seed}"
    return Task(inst.n, space, Direction.MINIMIZE, func, obj, A, B, key)


def resolve_target(cfg: ExperimentConfig, task: Task, inst: Optional[Instance] = None):
    if cfg.target is None:
        return None
    if cfg.target != "optimum":
        return int(cfg.target)
    if cfg.benchmark is not None:
        return get_benchmark(cfg.benchmark).optimum(task.n)
    if inst is None:
        inst = resolve_instance(cfg)
    return exhaustive_optimum(inst)[0]


def effective_budget(cfg: ExperimentConfig, n: int) -> int:
    return cfg.budget_per_n * n if cfg.budget_per_n is not None else cfg.budget


def _use_kernel(cfg: ExperimentConfig, task: Task, target) -> bool:
    if cfg.engine == "python" or task.kernel_obj is None:
        return False
    if task.kernel_obj in K.KEY_OBJECTIVES and target is not None:
        optimum = get_benchmark(cfg.benchmark).optimum(task.n)
        if target != optimum:
            return False
    if cfg.algorithm in ("rls", "ea-lehmer") and task.n < 2:
        return False
    return True


def _kernel_run(cfg: ExperimentConfig, task: Task, stop: StoppingCondition, seed: int) -> RunRecord:
    rng = np.random.default_rng(seed)
    n = task.n
    target = stop.target
    int_target = 0 if target is None or isinstance(target, LexKey) else int(target)
    maximize = task.direction is Direction.MAXIMIZE
    if cfg.algorithm == "ea-vector":
        evals, success, x = K.nval_run(n, stop.budget, target is not None, rng, _NO_INIT)
        sol = BoundedIntVector(n, x)
        return RunRecord(seed, int(evals), task.func(sol), bool(success) and target is not None, None, sol)
    if cfg.algorithm == "ea-perm":
        evals, success, f, x = K.perm_run(
            n, task.kernel_obj, _SCHEME_IDS[cfg.scheme], cfg.poisson_offset, stop.budget,
            target is not None, int_target, maximize, cfg.count_noop_evals, rng, _NO_INIT,
            task.A, task.B,
        )
        sol = Permutation._trusted(tuple(int(v) + 1 for v in x))
    else:
        ea = cfg.algorithm == "ea-lehmer"
        uniform = ea or cfg.prob_vector == "uniform"
        cum_p = _NO_FLOAT if uniform else _cum_prob(cfg.prob_vector, n)
        evals, success, f, x = K.lehmer_run(
            n, task.kernel_obj, _STEP_IDS[cfg.step], ea, cum_p, _cum_harmonic(n), stop.budget,
            target is not None, int_target, maximize, cfg.count_noop_evals, rng, _NO_INIT,
            task.A, task.B,
        )
        sol = LehmerCode._trusted(n, tuple(int(v) for v in x))
    best = task.func(sol) if task.kernel_obj in K.KEY_OBJECTIVES else int(f)
    return RunRecord(seed, int(evals), best, bool(success) and target is not None, None, sol)


_CUM_CACHE: dict = {}


def _cum_prob(kind: str, n: int) -> np.ndarray:
    key = ("p", kind, n)
    if key not in _CUM_CACHE:
        _CUM_CACHE[key] = np.cumsum(probability_vector(kind, n))
    return _CUM_CACHE[key]


def _cum_harmonic(n: int) -> np.ndarray:
    key = ("h", n)
    if key not in _CUM_CACHE:
        _CUM_CACHE[key] = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, n + 1))])
    return _CUM_CACHE[key]


def _python_run(cfg: ExperimentConfig, task: Task, stop: StoppingCondition, seed: int,
                record_trajectory: bool = False) -> RunRecord:
    common = dict(stop=stop, seed=seed, record_trajectory=record_trajectory)
    if cfg.algorithm == "rls":
        return rls_run(task.func, task.n, task.direction, cfg.step, cfg.prob_vector,
                       count_noop_evals=cfg.count_noop_evals, **common)
    if cfg.algorithm == "ea-lehmer":
        return ea_lehmer_run(task.func, task.n, task.direction, cfg.step,
                             count_noop_evals=cfg.count_noop_evals, **common)
    if cfg.algorithm == "ea-perm":
        return ea_perm_run(task.func, task.n, task.direction, cfg.scheme,
                           count_noop_evals=cfg.count_noop_evals,
                           poisson_offset=cfg.poisson_offset, **common)
    return ea_multivalued_run(task.func, task.n, task.direction, **common)


def single_run(cfg: ExperimentConfig, task: Task, target, seed: int,
               budget: Optional[int] = None, record_trajectory: bool = False) -> RunRecord:
    """One run (or one multistart run if ``cfg.restart_budget`` is set)."""
    total = budget if budget is not None else effective_budget(cfg, task.n)
    if cfg.restart_budget is None:
        return _one(cfg, task, target, seed, total, record_trajectory)
    used = 0
    best = None
    restart = 0
    while used < total:
        sub_seed = run_seed(seed % 2**63, restart)
        rec = _one(cfg, task, target, sub_seed, min(cfg.restart_budget, total - used), False)
        used += rec.evaluations_used
        if best is None or task.direction.better(rec.best_fitness, best.best_fitness):
            best = rec
        if rec.success:
            break
        restart += 1
    return RunRecord(seed, used, best.best_fitness, best.success, None, best.solution)


def _one(cfg, task, target, seed, budget, record_trajectory) -> RunRecord:
    stop = StoppingCondition(budget, target)
    if not record_trajectory and _use_kernel(cfg, task, target):
        return _kernel_run(cfg, task, stop, seed)
    return _python_run(cfg, task, stop, seed, record_trajectory)


# -- aggregation -------------------------------------------------------------


@dataclass
class AggregateResult:
    config: ExperimentConfig
    records: list[RunRecord]
    budget: int
    target: object
    success_rate: float
    mean_runtime: float
    ert: float
    runtime: dict
    rpd: Optional[list[float]] = None
    mean_rpd: Optional[float] = None
    reference_best: object = None

    def summary(self) -> dict:
        out = {
            "config_hash": self.config.config_hash(),
            "label": self.config.display_label,
            "config": self.config.to_dict(),
            "runs": len(self.records),
            "budget": self.budget,
            "target": None if self.target is None else str(self.target),
            "success_rate": _fmt(self.success_rate),
            "mean_runtime": _fmt(self.mean_runtime),
            "ert": _fmt(self.ert),
            "runtime": {k: _fmt(v) for k, v in self.runtime.items()},
        }
        if self.rpd is not None:
            out["mean_rpd"] = None if self.mean_rpd is None else _fmt(self.mean_rpd)
            out["reference_best"] = str(self.reference_best)
        return out


def _fmt(x: float):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return float(f"{x:.6f}")


def aggregate(cfg: ExperimentConfig, records: Sequence[RunRecord], budget: int, target) -> AggregateResult:
    runtimes = [r.evaluations_used if r.success else budget for r in records]
    success_rate = sum(r.success for r in records) / len(records)
    mean_rt = math.fsum(runtimes) / len(runtimes)
    return AggregateResult(
        cfg, list(records), budget, target, success_rate, mean_rt,
        ert(mean_rt, success_rate), runtime_summary(runtimes),
    )


def _scalar(v) -> Optional[float]:
    if isinstance(v, LexKey):
        try:
            return float(v.scalar())
        except UnsupportedOperation:
            return None
    return float(v)


def attach_rpd(results: Sequence[AggregateResult], tasks: Sequence[Task]) -> None:
    """RPD of every run against the best value of any run on the same instance."""
    groups: dict[str, list[int]] = {}
    for idx, task in enumerate(tasks):
        groups.setdefault(task.instance_key, []).append(idx)
    for idxs in groups.values():
        direction = tasks[idxs[0]].direction
        best = None
        for i in idxs:
            for rec in results[i].records:
                if best is None or direction.better(rec.best_fitness, best):
                    best = rec.best_fitness
        best_s = _scalar(best)
        for i in idxs:
            res = results[i]
            res.reference_best = best
            if best_s is None:
                res.rpd = [None] * len(res.records)
            else:
                minimize = direction is Direction.MINIMIZE
                res.rpd = [
                    None if (s := _scalar(r.best_fitness)) is None else rpd(s, best_s, minimize)
                    for r in res.records
                ]
            res.mean_rpd = mean_or_none(res.rpd)


# -- drivers -------------------------------------------------------------------


def _run_chunk(args) -> list[RunRecord]:
    cfg, inst, target, indices = args
    task = build_task(cfg, inst)
    return [single_run(cfg, task, target, run_seed(cfg.master_seed, i)) for i in indices]


def execute(cfg: ExperimentConfig, target_required: bool) -> tuple[AggregateResult, Task]:
    inst = resolve_instance(cfg) if cfg.instance is not None else None
    task = build_task(cfg, inst)
    target = resolve_target(cfg, task, inst)
    if target_required and target is None:
        raise ValueError("fixed-target experiments need a target")
    budget = effective_budget(cfg, task.n)
    indices = list(range(cfg.runs))
    if cfg.workers > 1 and cfg.runs > 1:
        chunks = [indices[w :: cfg.workers] for w in range(cfg.workers)]
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_chunk, [(cfg, inst, target, c) for c in chunks]))
        by_index = {}
        for chunk, recs in zip(chunks, parts):
            by_index.update(zip(chunk, recs))
        records = [by_index[i] for i in indices]
    else:
        records = [single_run(cfg, task, target, run_seed(cfg.master_seed, i)) for i in indices]
    log.info("%s: %d runs done", cfg.display_label, len(records))
    return aggregate(cfg, records, budget, target), task


def run_fixed_target(cfg: ExperimentConfig) -> AggregateResult:
    return execute(cfg, target_required=True)[0]


def run_suite(configs: Sequence[ExperimentConfig]) -> list[AggregateResult]:
    """Run every config; fixed-budget results get RPD against the suite-wide best."""
    results, tasks = [], []
    for cfg in configs:
        res, task = execute(cfg, target_required=cfg.mode == "fixed-target")
        results.append(res)
        tasks.append(task)
    fb = [i for i, c in enumerate(configs) if c.mode == "fixed-budget"]
    attach_rpd([results[i] for i in fb], [tasks[i] for i in fb])
    return results


def run_fixed_budget(cfg: ExperimentConfig) -> AggregateResult:
    if cfg.mode != "fixed-budget":
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "mode": "fixed-budget"})
    return run_suite([cfg])[0]


# -- serialization ---------------------------------------------------------------


def records_csv(results: Sequence[AggregateResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for res in results:
        h = res.config.config_hash()
        for r in res.records:
            w.writerow([h, r.seed, r.evaluations_used, str(r.best_fitness), int(r.success)])
    return buf.getvalue()


def summary_json(results: Sequence[AggregateResult]) -> str:
    return json.dumps({"experiments": [r.summary() for r in results]}, indent=2, sort_keys=True) + "\n"


def write_outputs(results: Sequence[AggregateResult], prefix) -> tuple[Path, Path]:
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    csv_path.write_text(records_csv(results))
    json_path.write_text(summary_json(results))
    return csv_path, json_path
