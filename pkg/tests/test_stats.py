import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from lehmer_ea.benchmarks import UnsupportedOperation
from lehmer_ea.experiments.stats import (
    BEST,
    SAME,
    WORSE,
    benjamini_hochberg,
    format_rank_table,
    read_metric_csv,
    wilcoxon_bh,
    wilcoxon_signed_rank,
)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=6, max_size=40))
def test_signed_rank_matches_scipy(pairs):
    x = np.array([a for a, _ in pairs], float)
    y = np.array([b for _, b in pairs], float)
    ours = wilcoxon_signed_rank(x, y)
    if np.all(x == y):
        assert ours.p_value == 1.0
        return
    ref = stats.wilcoxon(x, y, zero_method="wilcox", correction=False, method="approx")
    assert ours.statistic == pytest.approx(ref.statistic)
    assert ours.p_value == pytest.approx(ref.pvalue, rel=1e-9, abs=1e-12)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=30))
def test_bh_matches_scipy(p):
    assert np.allclose(benjamini_hochberg(p), stats.false_discovery_control(p))


def test_identical_algorithms():
    table = {"a": [1, 2, 3, 4, 5, 6, 7], "b": [1, 2, 3, 4, 5, 6, 7], "c": [1, 2, 3, 4, 5, 6, 7]}
    rows = wilcoxon_bh(table)
    assert all(r.average_rank == 2.0 for r in rows)
    assert [r.annotation for r in rows].count(BEST) == 1
    assert all(r.annotation in (BEST, SAME) for r in rows)


def test_dominated_algorithm_flagged():
    rng = np.random.default_rng(0)
    good = rng.uniform(0, 1, 20)
    table = {"good": good.tolist(), "bad": (good + rng.uniform(0.1, 1, 20)).tolist()}
    rows = wilcoxon_bh(table)
    assert rows[0].algorithm == "good" and rows[0].annotation == BEST
    assert rows[1].annotation == WORSE
    # all 20 differences share a sign: W = 0, mean 105, variance 717.5
    assert rows[1].p_value == pytest.approx(2 * stats.norm.sf(105 / np.sqrt(717.5)))


@given(st.integers(2, 5), st.integers(6, 25), st.integers(0, 2**32 - 1))
def test_rank_bounds(k, m, seed):
    rng = np.random.default_rng(seed)
    table = {f"alg{i}": rng.integers(0, 4, m).tolist() for i in range(k)}
    rows = wilcoxon_bh(table)
    assert len(rows) == k
    assert all(1 <= r.average_rank <= k for r in rows)
    assert sum(r.average_rank for r in rows) == pytest.approx(k * (k + 1) / 2)
    assert rows[0].annotation == BEST


def test_too_few_instances_or_algorithms():
    with pytest.raises(UnsupportedOperation):
        wilcoxon_bh({"a": [1] * 5, "b": [2] * 5})
    with pytest.raises(UnsupportedOperation):
        wilcoxon_bh({"a": [1] * 10})
    with pytest.raises(ValueError):
        wilcoxon_bh({"a": [1] * 10, "b": [1] * 9})


def test_metric_csv_roundtrip():
    text = "instance,algorithm,value\n" + "".join(
        f"i{i},{a},{v}\n" for i in range(6) for a, v in (("x", i), ("y", i + 1))
    )
    table = read_metric_csv(text)
    assert table == {"x": [0, 1, 2, 3, 4, 5], "y": [1, 2, 3, 4, 5, 6]}
    out = format_rank_table(wilcoxon_bh(table))
    assert "x" in out and BEST in out
    with pytest.raises(ValueError):
        read_metric_csv("instance,value\n")
    with pytest.raises(ValueError):
        read_metric_csv("instance,algorithm,value\ni0,x,1\ni1,y,2\n")
