"""Experiment configuration, loaded from JSON."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

ALGORITHMS = ("rls", "ea-lehmer", "ea-perm", "ea-vector")
MODES = ("fixed-target", "fixed-budget")
ENGINES = ("auto", "python", "compiled")

# Fields that do not influence results and stay out of the config hash.
_HASH_EXCLUDE = {"output", "workers"}


@dataclass
class ExperimentConfig:
    """One algorithm on one benchmark or instance.

    ``target`` is ``"optimum"`` (benchmark optimum, or exhaustive optimum for
    an instance), an integer, or ``None``. ``count_noop_evals`` left unset
    means True for benchmarks and False for LOP/QAP instances. ``budget_per_n`` overrides
    ``budget`` with ``budget_per_n * n``. ``restart_budget`` turns every run
    into a multistart run whose restarts each get that many evaluations.
    """

    algorithm: str
    benchmark: Optional[str] = None
    instance: Optional[str] = None
    problem: Optional[str] = None
    n: Optional[int] = None
    step: str = "uniform"
    prob_vector: str = "uniform"
    scheme: str = "insertion"
    runs: int = 1000
    budget: int = 1_000_000
    budget_per_n: Optional[int] = None
    target: Union[str, int, None] = "optimum"
    mode: str = "fixed-target"
    master_seed: int = 0
    count_noop_evals: Optional[bool] = None
    poisson_offset: int = 0
    subsample: Optional[int] = None
    subsample_seed: int = 0
    restart_budget: Optional[int] = None
    engine: str = "auto"
    label: Optional[str] = None
    workers: int = 1
    output: Optional[str] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if (self.benchmark is None) == (self.instance is None):
            raise ValueError("set exactly one of 'benchmark' or 'instance'")
        if self.instance is not None and self.problem not in ("lop", "qap"):
            raise ValueError("instance experiments need problem = 'lop' or 'qap'")
        if self.benchmark is not None and (self.n is None or self.n < 1):
            raise ValueError("benchmark experiments need a positive n")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.budget < 1 or (self.budget_per_n is not None and self.budget_per_n < 1):
            raise ValueError("budget must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {ENGINES}")
        if isinstance(self.target, str) and self.target != "optimum":
            raise ValueError("target must be 'optimum', an integer, or null")
        if self.count_noop_evals is None:
            self.count_noop_evals = self.instance is None
        if self.poisson_offset < 0:
            raise ValueError("poisson_offset must be >= 0")

    @property
    def display_label(self) -> str:
        if self.label:
            return self.label
        if self.algorithm == "ea-perm":
            return f"ea-perm[{self.scheme}]"
        if self.algorithm == "rls":
            return f"rls[{self.step},{self.prob_vector}]"
        if self.algorithm == "ea-lehmer":
            return f"ea-lehmer[{self.step}]"
        return self.algorithm

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        payload = {k: v for k, v in self.to_dict().items() if k not in _HASH_EXCLUDE}
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def load_configs(path) -> tuple[list[ExperimentConfig], Optional[str]]:
    """Read a JSON config: one experiment object, or ``{"defaults", "experiments"}``.

    Relative instance paths resolve against the config file's directory.
    Returns the configs and the suite-level output prefix (if any).
    """
    path = Path(path)
    data = json.loads(path.read_text())
    if "experiments" in data:
        defaults = data.get("defaults", {})
        items = [{**defaults, **item} for item in data["experiments"]]
        output = data.get("output")
    else:
        items = [data]
        output = data.get("output")
    configs = []
    for item in items:
        inst = item.get("instance")
        if inst is not None and not Path(inst).is_absolute():
            item = {**item, "instance": str(path.parent / inst)}
        configs.append(ExperimentConfig.from_dict(item))
    return configs, output


def run_seed(master_seed: int, run_index: int, *salt: int) -> int:
    """64-bit per-run seed derived from (master_seed, *salt, run_index)."""
    ss = np.random.SeedSequence([master_seed, *salt, run_index])
    return int(ss.generate_state(1, np.uint64)[0])
