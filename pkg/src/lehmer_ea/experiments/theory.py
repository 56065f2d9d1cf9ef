"""Closed-form expected optimization times and empirical validators.

Each validator runs the algorithm/benchmark pairing a theorem is about and
compares the mean optimization time (evaluations after the initial sample)
with the closed form, a band, or a fitted log-log slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np

from .. import kernels as K
from .config import ExperimentConfig, run_seed
from .runner import execute

HUGE_BUDGET = 10**15


def harmonic_number(n: int):
    """H_n as an exact Fraction for n <= 30, a float beyond (H_0 = 0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n <= 30:
        return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))
    return math.fsum(1.0 / i for i in range(1, n + 1))


def _hmp(n: int):
    h = harmonic_number(n)
    if isinstance(h, Fraction):
        return mpmath.mpf(h.numerator) / h.denominator
    return mpmath.fsum(mpmath.mpf(1) / i for i in range(1, n + 1))


def _thm2(n):
    H = _hmp(n)
    return mpmath.mpf(n) ** 3 / 2 - 2 * n**2 + n * H + mpmath.mpf(3 * n) / 2 - H


def _thm4(n):
    H = _hmp(n)
    return mpmath.mpf(n) ** 3 / 2 - n**2 * H / 2 - mpmath.mpf(n) ** 2 / 2 + n * H / 2


def _thm6(n):
    n = mpmath.mpf(n)
    return 2 * n**4 / 9 - 7 * n**3 / 18 + n**2 / 9 + n / 18


def _thm11_lead(n):
    N = mpmath.mpf(n - 1)
    e = mpmath.e
    return (e - 2) * N**3 + (3 - 3 * e / 2) * N**2


def _thm15_lead(n):
    N = mpmath.mpf(n - 1)
    r = mpmath.sqrt(mpmath.e)
    return (32 * r - 52) / 3 * N**4 + (28 - 16 * r) / 3 * N**3


def _thm15_sum(n):
    # sum over labels of phase waits times random-walk hitting times
    N = mpmath.mpf(n - 1)
    q = 1 - 1 / (2 * N)
    return mpmath.fsum(N / q ** (n - i) * (i - 1) * (2 * i - 1) / 3 for i in range(2, n + 1))


def _thm1_upper(n):
    N = mpmath.mpf(n - 1)
    return N**2 * mpmath.log(n) + N**2


def _thm1_lead(n):
    return mpmath.mpf(n - 1) ** 2 * mpmath.log(n)


def _thm8_upper(n):
    N = mpmath.mpf(n - 1)
    e = mpmath.e
    return e * N**2 * mpmath.log(n) + 2 * e * N**2 - 2 * e * N


def _thm12_lower(n):
    return mpmath.mpf(n - 1) ** 2


CLOSED_FORMS = {
    "thm2": _thm2,
    "thm4": _thm4,
    "thm6": _thm6,
    "thm11-lead": _thm11_lead,
    "thm15-lead": _thm15_lead,
    "thm15-sum": _thm15_sum,
    "thm1-upper": _thm1_upper,
    "thm1-lead": _thm1_lead,
    "thm8-upper": _thm8_upper,
    "thm12-lower": _thm12_lower,
}


def closed_form(theorem: str, n: int) -> float:
    if theorem not in CLOSED_FORMS:
        raise ValueError(f"unknown closed form {theorem!r}; choose from {sorted(CLOSED_FORMS)}")
    if n < 2:
        raise ValueError("closed forms are stated for n >= 2")
    with mpmath.workdps(50):
        return float(CLOSED_FORMS[theorem](n))


def rls_onemax_uniform_expectation(n: int) -> float:
    """Exact expected optimization time of RLS (uniform step and vector) on L-OneMax.

    A nonzero entry with domain size i reaches 0 only by proposing 0, which
    happens with probability 1/((n-1)(i-1)) per step regardless of its value.
    The events are disjoint across entries, so this is a coupon collector with
    unequal probabilities, and its mean equals the Poissonized integral
    ``int_0^inf 1 - prod_i (1 - (i-1)/i * exp(-t / ((n-1)(i-1)))) dt``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    with mpmath.workdps(30):
        def alive(t):
            return 1 - mpmath.fprod(
                1 - mpmath.mpf(i - 1) / i * mpmath.exp(-t / ((n - 1) * (i - 1)))
                for i in range(2, n + 1)
            )
        scale = (n - 1) ** 2
        return float(mpmath.quad(alive, [0, scale, 10 * scale, 100 * scale, mpmath.inf]))


# -- validation -----------------------------------------------------------------


@dataclass(frozen=True)
class Pairing:
    algorithm: str
    benchmark: str
    kind: str  # "exact" | "lead-above" | "band" | "slope"
    step: str = "uniform"
    prob_vector: str = "uniform"
    reference: Optional[str] = None
    lower: Optional[str] = None
    upper: Optional[str] = None
    lower_factor: float = 1.0
    slope_range: Optional[tuple[float, float]] = None
    default_tolerance: float = 0.03


PAIRINGS = {
    "thm1-band": Pairing("rls", "l-onemax", "band", lower="thm1-lead", upper="thm1-upper",
                         lower_factor=0.8),
    "thm2": Pairing("rls", "l-leadingzeros", "exact", reference="thm2"),
    "thm4": Pairing("rls", "l-leadingzeros", "exact", prob_vector="proportional",
                    reference="thm4"),
    "thm6": Pairing("rls", "l-leadingzeros", "exact", step="unit", reference="thm6"),
    "thm8-upper": Pairing("ea-lehmer", "l-onemax", "band", upper="thm8-upper"),
    "thm11": Pairing("ea-lehmer", "l-leadingzeros", "lead-above", reference="thm11-lead",
                     default_tolerance=0.10),
    "thm12-lower": Pairing("ea-lehmer", "l-onemax", "band", step="unit", lower="thm12-lower"),
    "thm15": Pairing("ea-lehmer", "l-leadingzeros", "exact", step="unit",
                     reference="thm15-lead", default_tolerance=0.05),
    "thm15-sum": Pairing("ea-lehmer", "l-leadingzeros", "exact", step="unit",
                         reference="thm15-sum", default_tolerance=0.05),
    "slope-thm1": Pairing("rls", "l-onemax", "slope", slope_range=(2.0, 2.3)),
    "slope-thm3": Pairing("rls", "l-onemax", "slope", prob_vector="proportional",
                          slope_range=(2.0, 2.3)),
    "slope-thm5": Pairing("rls", "l-onemax", "slope", step="unit", slope_range=(1.85, 2.15),
                          default_tolerance=0.15),
    "slope-thm8": Pairing("ea-lehmer", "l-onemax", "slope", slope_range=(2.0, 2.3)),
    "slope-thm9": Pairing("ea-lehmer", "facval", "slope", slope_range=(2.0, 2.3)),
    "slope-thm10": Pairing("ea-vector", "nval", "slope", slope_range=(2.0, 2.3)),
    "slope-thm13": Pairing("ea-lehmer", "l-onemax", "slope", step="unit",
                           slope_range=(1.85, 2.15), default_tolerance=0.15),
    "slope-thm14": Pairing("ea-lehmer", "facval", "slope", step="unit",
                           slope_range=(1.85, 2.3)),
}

DEFAULT_SLOPE_NS = (50, 100, 150, 200)


@dataclass
class TheoremReport:
    theorem: str
    ns: tuple[int, ...]
    runs: int
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    target: object
    statistic: float
    passed: bool
    detail: str = ""
    samples: dict = field(default_factory=dict, repr=False)

    @property
    def mean(self) -> float:
        return self.means[-1]

    @property
    def stderr(self) -> float:
        return self.stderrs[-1]

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.theorem} n={','.join(map(str, self.ns))} runs={self.runs}: {self.detail}"


def optimization_times(pairing: Pairing, n: int, runs: int, master_seed: int,
                       engine: str = "auto") -> np.ndarray:
    cfg = ExperimentConfig(
        algorithm=pairing.algorithm, benchmark=pairing.benchmark, n=n, step=pairing.step,
        prob_vector=pairing.prob_vector, runs=runs, budget=HUGE_BUDGET, target="optimum",
        master_seed=master_seed, engine=engine,
    )
    res, _ = execute(cfg, target_required=True)
    if not all(r.success for r in res.records):
        raise RuntimeError(f"{pairing.algorithm} on {pairing.benchmark} n={n} did not finish")
    return np.array([r.optimization_time for r in res.records], dtype=float)


def _stats(t: np.ndarray) -> tuple[float, float]:
    return float(t.mean()), float(t.std(ddof=1) / math.sqrt(t.size)) if t.size > 1 else 0.0


def validate_theorem(theorem: str, n: Optional[int] = None, runs: int = 1000,
                     tolerance: Optional[float] = None, master_seed: int = 0,
                     ns: Optional[Sequence[int]] = None, engine: str = "auto") -> TheoremReport:
    """Run the pairing behind ``theorem`` and judge it against the stated form.

    * exact: ``|mean / closed_form - 1| <= tolerance``
    * lead-above: ``1 <= mean / leading_terms <= 1 + tolerance``
    * band: ``lower_factor * lower <= mean <= upper``
    * slope: least-squares log-log slope over ``ns`` inside the pairing's range
      (for a point exponent of 2 the range is ``2 +- tolerance``)
    """
    if theorem not in PAIRINGS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {sorted(PAIRINGS)}")
    p = PAIRINGS[theorem]
    tol = p.default_tolerance if tolerance is None else tolerance

    if p.kind == "slope":
        ns = tuple(ns or DEFAULT_SLOPE_NS)
        if len(ns) < 2:
            raise ValueError("a slope check needs at least two sizes")
        means, ses, samples = [], [], {}
        for size in ns:
            t = optimization_times(p, size, runs, run_seed(master_seed, size), engine)
            m, se = _stats(t)
            means.append(m)
            ses.append(se)
            samples[size] = t
        slope = float(np.polyfit(np.log(ns), np.log(means), 1)[0])
        lo, hi = p.slope_range
        if tolerance is not None and p.slope_range[0] < 2.0 < p.slope_range[1]:
            lo, hi = 2.0 - tol, 2.0 + tol
        ok = lo <= slope <= hi
        return TheoremReport(theorem, ns, runs, tuple(means), tuple(ses), (lo, hi), slope, ok,
                             f"slope={slope:.4f} range=[{lo:.2f}, {hi:.2f}]", samples)

    if n is None:
        raise ValueError("n is required")
    t = optimization_times(p, n, runs, master_seed, engine)
    mean, se = _stats(t)
    if p.kind == "band":
        lo = p.lower_factor * closed_form(p.lower, n) if p.lower else 0.0
        hi = closed_form(p.upper, n) if p.upper else math.inf
        ok = lo <= mean <= hi
        detail = f"mean={mean:.2f} se={se:.2f} band=[{lo:.2f}, {hi:.2f}]"
        return TheoremReport(theorem, (n,), runs, (mean,), (se,), (lo, hi), mean, ok, detail,
                             {n: t})
    ref = closed_form(p.reference, n)
    ratio = mean / ref
    if p.kind == "exact":
        ok = abs(ratio - 1.0) <= tol
        detail = f"mean={mean:.2f} se={se:.2f} closed_form={ref:.2f} ratio={ratio:.4f} tol={tol}"
    else:
        ok = 1.0 <= ratio <= 1.0 + tol
        detail = (f"mean={mean:.2f} se={se:.2f} leading_terms={ref:.2f} ratio={ratio:.4f} "
                  f"allowed=[1, {1 + tol}]")
    return TheoremReport(theorem, (n,), runs, (mean,), (se,), ref, ratio, ok, detail, {n: t})


# -- random-walk hitting time ---------------------------------------------------------


@dataclass
class WalkReport:
    i: int
    samples: int
    mean: float
    stderr: float
    expected: float
    passed: bool


def walk_expectation(i: int, x0: Optional[int] = None) -> float:
    """E[X0 (2i - 1 - X0)]; X0 uniform on {0..i-1} unless fixed."""
    if x0 is not None:
        return float(x0 * (2 * i - 1 - x0))
    return (i - 1) * (2 * i - 1) / 3


def random_walk_hitting_check(i: int, samples: int, rng: np.random.Generator,
                              x0: Optional[int] = None, n_se: float = 3.0) -> WalkReport:
    """Simulate the walk absorbed at 0 and lazily reflected at i-1."""
    if i < 2:
        raise ValueError("the walk needs i >= 2")
    if x0 is not None and not 0 <= x0 <= i - 1:
        raise ValueError(f"x0 outside 0..{i - 1}")
    t = K.walk_hitting_times(i, samples, rng, -1 if x0 is None else x0).astype(float)
    mean = float(t.mean())
    se = float(t.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    expected = walk_expectation(i, x0)
    ok = abs(mean - expected) <= n_se * se if se > 0 else mean == expected
    return WalkReport(i, samples, mean, se, expected, ok)
