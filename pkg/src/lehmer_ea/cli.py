"""Command-line entry point.

Outputs of ``experiment`` (``<prefix>.csv`` and ``<prefix>.json``):

CSV, one row per run:
  config_hash       first 12 hex digits of the SHA-256 of the config
  seed              64-bit per-run seed derived from (master_seed, run index)
  evaluations_used  evaluations including the initial sample
  best_fitness      best value found (lexicographic keys print as integers,
                    or as colon-separated digits when too large)
  success           1 if the target was reached, else 0

JSON: one summary per experiment with success rate, mean runtime (failures
charged the full budget), ERT ("inf" when nothing succeeded), runtime
statistics and, in fixed-budget mode, mean RPD against the suite-wide best.
Floats are rounded to 6 decimals so repeated runs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .algorithms import RunRecord
from .benchmarks import BENCHMARKS, UnsupportedOperation, get_benchmark
from .experiments.config import ALGORITHMS, ExperimentConfig, load_configs, run_seed
from .experiments.runner import (
    build_task,
    effective_budget,
    resolve_instance,
    resolve_target,
    run_suite,
    single_run,
    write_outputs,
)
from .experiments.stats import format_rank_table, read_metric_csv, wilcoxon_bh
from .experiments.theory import DEFAULT_SLOPE_NS, PAIRINGS, validate_theorem
from .lehmer import LehmerCode, decode, encode
from .perm import SCHEMES, Permutation
from .problems import ParseError, evaluate, exhaustive_optimum, load_instance


def _cmd_encode(args) -> int:
    print(encode(Permutation.parse(args.permutation)))
    return 0


def _cmd_decode(args) -> int:
    print(decode(LehmerCode.parse(args.code)))
    return 0


def _cmd_eval(args) -> int:
    if args.benchmark:
        print(get_benchmark(args.benchmark).evaluate_literal(args.point))
    else:
        inst = load_instance(args.instance, args.problem)
        print(evaluate(inst, Permutation.parse(args.point)))
    return 0


def _cmd_exhaustive(args) -> int:
    value, sigma = exhaustive_optimum(load_instance(args.instance, args.problem))
    print(f"optimum {value}")
    print(f"permutation {sigma}")
    return 0


def _config_from_args(args) -> ExperimentConfig:
    target = args.target
    if target not in (None, "optimum", "none"):
        target = int(target)
    if target == "none":
        target = None
    return ExperimentConfig(
        algorithm=args.algorithm, benchmark=args.benchmark, instance=args.instance,
        problem=args.problem, n=args.n, step=args.step, prob_vector=args.prob_vector,
        scheme=args.scheme, runs=1, budget=args.budget, target=target,
        master_seed=args.seed, count_noop_evals=args.count_noop_evals,
        poisson_offset=args.poisson_offset, engine=args.engine,
    )


def _record_dict(rec: RunRecord) -> dict:
    out = {
        "seed": rec.seed,
        "evaluations_used": rec.evaluations_used,
        "optimization_time": rec.optimization_time,
        "best_fitness": str(rec.best_fitness),
        "success": rec.success,
        "solution": str(rec.solution),
    }
    if rec.trajectory is not None:
        out["trajectory"] = [[e, str(f)] for e, f in rec.trajectory]
    return out


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    inst = resolve_instance(cfg) if cfg.instance is not None else None
    task = build_task(cfg, inst)
    target = resolve_target(cfg, task, inst)
    rec = single_run(cfg, task, target, run_seed(cfg.master_seed, 0),
                     effective_budget(cfg, task.n), args.trajectory)
    print(json.dumps(_record_dict(rec), indent=2))
    return 0


def _cmd_experiment(args) -> int:
    configs, prefix = load_configs(args.config)
    if args.workers is not None:
        configs = [ExperimentConfig.from_dict({**c.to_dict(), "workers": args.workers}) for c in configs]
    prefix = args.output or prefix or configs[0].output or str(Path(args.config).with_suffix(""))
    results = run_suite(configs)
    csv_path, json_path = write_outputs(results, prefix)
    for res in results:
        s = res.summary()
        extra = f" mean_rpd={s['mean_rpd']}" if "mean_rpd" in s else ""
        print(f"{s['label']}: success_rate={s['success_rate']} ert={s['ert']}{extra}")
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _cmd_validate(args) -> int:
    ns = tuple(args.ns) if args.ns else None
    report = validate_theorem(args.theorem, n=args.n, runs=args.runs, tolerance=args.tolerance,
                              master_seed=args.seed, ns=ns)
    print(report.line())
    return 0 if report.passed else 1


def _cmd_stats(args) -> int:
    table = read_metric_csv(Path(args.csv).read_text())
    print(format_rank_table(wilcoxon_bh(table, alpha=args.alpha)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lehmer-ea", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("encode", help="permutation literal -> Lehmer code (labels n..2)")
    s.add_argument("permutation", help="e.g. 3,5,4,1,2")
    s.set_defaults(func=_cmd_encode)

    s = sub.add_parser("decode", help="Lehmer code (labels n..2) -> permutation literal")
    s.add_argument("code", help="e.g. 2,3,2,0")
    s.set_defaults(func=_cmd_decode)

    def add_target(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--benchmark", choices=sorted(BENCHMARKS))
        g.add_argument("--instance", help="LOLIB or QAPLIB file")
        sp.add_argument("--problem", choices=("lop", "qap"))

    s = sub.add_parser("eval", help="evaluate a benchmark or instance at a point")
    add_target(s)
    s.add_argument("point", help="Lehmer code, permutation or vector literal")
    s.set_defaults(func=_cmd_eval)

    s = sub.add_parser("exhaustive", help="exact optimum of a small instance")
    s.add_argument("--instance", required=True)
    s.add_argument("--problem", choices=("lop", "qap"), required=True)
    s.set_defaults(func=_cmd_exhaustive)

    s = sub.add_parser("run", help="one run; prints the run record as JSON")
    s.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    add_target(s)
    s.add_argument("--n", type=int)
    s.add_argument("--step", default="uniform", choices=("uniform", "unit", "harmonic"))
    s.add_argument("--prob-vector", default="uniform", choices=("uniform", "proportional"))
    s.add_argument("--scheme", default="insertion", choices=SCHEMES)
    s.add_argument("--budget", type=int, default=1_000_000)
    s.add_argument("--target", default="optimum", help="'optimum', an integer, or 'none'")
    s.add_argument("--seed", type=int, default=0, help="master seed")
    s.add_argument("--count-noop-evals", action=argparse.BooleanOptionalAction, default=None,
                   help="charge offspring identical to the parent (default: yes for benchmarks, "
                   "no for instances)")
    s.add_argument("--poisson-offset", type=int, default=0)
    s.add_argument("--engine", default="auto", choices=("auto", "python", "compiled"))
    s.add_argument("--trajectory", action="store_true", help="record improvements")
    s.set_defaults(func=_cmd_run)

    s = sub.add_parser("experiment", help="JSON config -> <prefix>.csv and <prefix>.json")
    s.add_argument("config")
    s.add_argument("--output", help="output prefix (overrides the config)")
    s.add_argument("--workers", type=int)
    s.set_defaults(func=_cmd_experiment)

    s = sub.add_parser("validate", help="compare empirical runtimes with a closed form")
    s.add_argument("theorem", choices=sorted(PAIRINGS))
    s.add_argument("--n", type=int)
    s.add_argument("--ns", type=int, nargs="+",
                   help=f"sizes for slope checks (default {' '.join(map(str, DEFAULT_SLOPE_NS))})")
    s.add_argument("--runs", type=int, default=1000)
    s.add_argument("--tolerance", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("stats", help="metric CSV (instance,algorithm,value) -> rank table")
    s.add_argument("csv")
    s.add_argument("--alpha", type=float, default=0.05)
    s.set_defaults(func=_cmd_stats)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "problem", None) is None and getattr(args, "instance", None):
        parser.error("--instance needs --problem")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, UnsupportedOperation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
