"""Aggregate metrics: success rate, ERT and relative percentage deviation."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np


def ert(mean_runtime: float, success_rate: float) -> float:
    """Mean runtime (failures charged the full budget) over the success rate."""
    if not 0.0 <= success_rate <= 1.0:
        raise ValueError(f"success rate {success_rate} outside [0, 1]")
    if success_rate == 0.0:
        return math.inf
    return mean_runtime / success_rate


def rpd(value: float, best: float, minimize: bool = True) -> float:
    """100 * (value - best) / best, oriented so that worse is positive."""
    gap = value - best if minimize else best - value
    if best == 0:
        return 0.0 if gap == 0 else math.inf
    return 100.0 * gap / abs(best)


def runtime_summary(runtimes: Sequence[float]) -> dict:
    arr = np.asarray(runtimes, dtype=float)
    return {
        "mean": float(arr.mean()),
        "sd": float(arr.std(ddof=1)) if arr.size > 1 else 0.0,
        "min": float(arr.min()),
        "max": float(arr.max()),
    }


def mean_or_none(values: Sequence[Optional[float]]) -> Optional[float]:
    vals = [v for v in values if v is not None]
    if len(vals) != len(values) or not vals:
        return None
    return float(math.fsum(vals) / len(vals))
