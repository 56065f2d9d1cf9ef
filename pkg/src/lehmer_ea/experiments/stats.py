"""Average ranks with Wilcoxon signed-rank tests and Benjamini-Hochberg control.

Each algorithm is compared against the best-ranked one on per-instance paired
values (lower is better). The signed-rank test is two-sided and uses the
normal approximation with a tie correction; zero differences are dropped.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.special import ndtr
from scipy.stats import rankdata

from ..benchmarks import UnsupportedOperation

MIN_INSTANCES = 6
BEST = "best"
SAME = "not-significantly-different"
WORSE = "significantly-worse"


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # min(W+, W-)
    z: float
    p_value: float
    n_nonzero: int


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float]) -> WilcoxonResult:
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    d = d[d != 0]
    m = d.size
    if m == 0:
        return WilcoxonResult(0.0, 0.0, 1.0, 0)
    r = rankdata(np.abs(d))
    w_plus = float(r[d > 0].sum())
    w_minus = float(r[d < 0].sum())
    mean = m * (m + 1) / 4.0
    _, counts = np.unique(np.abs(d), return_counts=True)
    var = m * (m + 1) * (2 * m + 1) / 24.0 - float((counts**3 - counts).sum()) / 48.0
    if var <= 0:
        return WilcoxonResult(min(w_plus, w_minus), 0.0, 1.0, m)
    z = (w_plus - mean) / math.sqrt(var)
    p = float(min(1.0, 2.0 * ndtr(-abs(z))))
    return WilcoxonResult(min(w_plus, w_minus), z, p, m)


def benjamini_hochberg(p_values: Sequence[float]) -> np.ndarray:
    """Step-up adjusted p-values."""
    p = np.asarray(p_values, dtype=float)
    m = p.size
    if m == 0:
        return p
    order = np.argsort(p)
    scaled = p[order] * m / np.arange(1, m + 1)
    adj = np.minimum.accumulate(scaled[::-1])[::-1]
    out = np.empty(m)
    out[order] = np.minimum(adj, 1.0)
    return out


@dataclass
class RankRow:
    algorithm: str
    average_rank: float
    p_value: Optional[float]
    p_adjusted: Optional[float]
    annotation: str


def wilcoxon_bh(table: Mapping[str, Sequence[float]], alpha: float = 0.05) -> list[RankRow]:
    """Rank algorithms per instance and test each against the best-ranked one.

    ``table`` maps algorithm name to one value per instance (same order for
    every algorithm). Rows come back sorted by average rank.
    """
    names = list(table)
    if len(names) < 2:
        raise UnsupportedOperation("need at least two algorithms")
    lengths = {len(table[a]) for a in names}
    if len(lengths) != 1:
        raise ValueError("every algorithm needs one value per instance")
    n_inst = lengths.pop()
    if n_inst < MIN_INSTANCES:
        raise UnsupportedOperation(
            f"need at least {MIN_INSTANCES} instances for the normal approximation, got {n_inst}"
        )
    values = np.array([table[a] for a in names], dtype=float)
    ranks = np.apply_along_axis(rankdata, 0, values)
    avg = ranks.mean(axis=1)
    best = int(np.argmin(avg))
    others = [i for i in range(len(names)) if i != best]
    pvals = [wilcoxon_signed_rank(values[i], values[best]).p_value for i in others]
    adj = benjamini_hochberg(pvals)
    rows = [RankRow(names[best], float(avg[best]), None, None, BEST)]
    for i, p, q in zip(others, pvals, adj):
        rows.append(RankRow(names[i], float(avg[i]), p, float(q), WORSE if q < alpha else SAME))
    rows.sort(key=lambda r: (r.average_rank, r.algorithm != names[best]))
    return rows


def read_metric_csv(text: str) -> dict[str, list[float]]:
    """Parse ``instance,algorithm,value`` rows into the ``wilcoxon_bh`` table."""
    reader = csv.DictReader(io.StringIO(text))
    need = {"instance", "algorithm", "value"}
    if reader.fieldnames is None or not need <= set(reader.fieldnames):
        raise ValueError(f"metric CSV needs columns {sorted(need)}")
    cells: dict[tuple[str, str], float] = {}
    instances: list[str] = []
    algorithms: list[str] = []
    for row in reader:
        inst, alg = row["instance"], row["algorithm"]
        if inst not in instances:
            instances.append(inst)
        if alg not in algorithms:
            algorithms.append(alg)
        cells[(inst, alg)] = float(row["value"])
    missing = [(i, a) for i in instances for a in algorithms if (i, a) not in cells]
    if missing:
        raise ValueError(f"metric CSV misses {len(missing)} instance/algorithm cells, e.g. {missing[0]}")
    return {a: [cells[(i, a)] for i in instances] for a in algorithms}


def format_rank_table(rows: Sequence[RankRow]) -> str:
    lines = [f"{'algorithm':<32} {'avg_rank':>8} {'p_adj':>10}  annotation"]
    for r in rows:
        q = "-" if r.p_adjusted is None else f"{r.p_adjusted:.4g}"
        lines.append(f"{r.algorithm:<32} {r.average_rank:>8.3f} {q:>10}  {r.annotation}")
    return "\n".join(lines)
