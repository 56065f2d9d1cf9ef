"""Check empirical optimization times against the closed forms and bands.

Usage: python scripts/validate_theorems.py [--runs 1000] [--seed 12345] [--quick]
"""

import argparse
import sys
import time

from lehmer_ea.experiments.theory import rls_onemax_uniform_expectation, validate_theorem

# (theorem, n, runs override, tolerance); n=None means a slope fit over the default sizes
CHECKS = [
    ("thm2", 50, None, 0.03),
    ("thm4", 50, None, 0.03),
    ("thm6", 30, None, 0.03),
    ("thm1-band", 100, None, None),
    ("thm11", 100, 100, 0.10),
    ("thm15", 30, 100, 0.05),
    ("slope-thm5", None, None, 0.15),
    ("slope-thm13", None, None, 0.15),
    ("slope-thm8", None, None, None),
    ("slope-thm10", None, None, None),
]

QUICK = {"thm11", "thm15", "slope-thm8", "slope-thm10", "slope-thm13"}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--quick", action="store_true", help="skip the checks that take minutes")
    args = ap.parse_args(argv)
    failed = 0
    for theorem, n, runs, tol in CHECKS:
        if args.quick and theorem in QUICK:
            continue
        t0 = time.perf_counter()
        rep = validate_theorem(theorem, n=n, runs=runs or args.runs, tolerance=tol,
                               master_seed=args.seed)
        print(f"{rep.line()}  ({time.perf_counter() - t0:.1f}s)", flush=True)
        if theorem == "thm1-band":
            print(f"    exact expectation at n={n}: {rls_onemax_uniform_expectation(n):.2f}")
        failed += not rep.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
