import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lehmer_ea.benchmarks import UnsupportedOperation
from lehmer_ea.perm import Permutation, sample_uniform_permutation
from lehmer_ea.problems import (
    LopInstance,
    ParseError,
    QapInstance,
    evaluate,
    exhaustive_optimum,
    load_instance,
    lop_eval,
    parse_lolib,
    parse_qaplib,
    qap_eval,
    render_lolib,
    render_qaplib,
    subsample,
)

P = Permutation


def naive_lop(B, s):
    n = len(s.values)
    return sum(int(B[s(i) - 1][s(j) - 1]) for i in range(1, n + 1) for j in range(1, i))


def naive_qap(A, B, s):
    n = len(s.values)
    return sum(
        int(A[i - 1][j - 1]) * int(B[s(i) - 1][s(j) - 1])
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )


def brute_force(inst):
    best = None
    for t in itertools.permutations(range(1, inst.n + 1)):
        v = evaluate(inst, P(t))
        if best is None or v < best[0]:
            best = (v, P(t))
    return best


def random_lop(rng, n, lo=-50, hi=100):
    return LopInstance(rng.integers(lo, hi, (n, n)))


def random_qap(rng, n, lo=0, hi=30):
    return QapInstance(rng.integers(lo, hi, (n, n)), rng.integers(lo, hi, (n, n)))


# -- evaluation ---------------------------------------------------------------------


def test_lop_examples():
    assert lop_eval(LopInstance([[7]]), P((1,))) == 0
    inst = LopInstance([[0, 5], [3, 0]])
    assert lop_eval(inst, P((1, 2))) == 3
    assert lop_eval(inst, P((2, 1))) == 5


def test_lop_triangle_complement():
    rng = np.random.default_rng(11)
    inst = random_lop(rng, 10)
    off = int(inst.B.sum() - np.trace(inst.B))
    for _ in range(50):
        s = sample_uniform_permutation(10, rng)
        idx = np.array(s.values) - 1
        upper = int(np.triu(inst.B[np.ix_(idx, idx)], 1).sum())
        assert lop_eval(inst, s) + upper == off


def test_qap_examples():
    A = [[0, 1], [1, 0]]
    B = [[0, 2], [2, 0]]
    inst = QapInstance(A, B)
    assert qap_eval(inst, P((1, 2))) == 4
    assert qap_eval(inst, P((2, 1))) == 4
    zero = QapInstance(np.zeros((3, 3), int), np.arange(9).reshape(3, 3))
    assert qap_eval(zero, P((3, 1, 2))) == 0


def test_qap_includes_diagonal():
    inst = QapInstance([[2, 0], [0, 3]], [[5, 0], [0, 7]])
    assert qap_eval(inst, P((1, 2))) == 2 * 5 + 3 * 7
    assert qap_eval(inst, P((2, 1))) == 2 * 7 + 3 * 5


def test_evaluators_match_naive():
    rng = np.random.default_rng(12)
    for _ in range(100):
        n = int(rng.integers(1, 12))
        lop, qap = random_lop(rng, n), random_qap(rng, n, -20, 20)
        s = sample_uniform_permutation(n, rng)
        assert lop_eval(lop, s) == naive_lop(lop.B, s)
        assert qap_eval(qap, s) == naive_qap(qap.A, qap.B, s)


def test_size_mismatch():
    with pytest.raises(ValueError):
        lop_eval(LopInstance([[0, 1], [1, 0]]), P.identity(3))
    with pytest.raises(ValueError):
        QapInstance(np.zeros((2, 2), int), np.zeros((3, 3), int))


def test_overflow_is_checked():
    big = 2**62
    inst = LopInstance([[0, 0, 0], [big, 0, 0], [big, big, 0]])
    assert not inst.int64_safe
    with pytest.raises(OverflowError):
        lop_eval(inst, P.identity(3))
    assert lop_eval(inst, P((3, 2, 1))) == 0
    q = QapInstance([[big, 0], [0, 0]], [[4, 0], [0, 0]])
    with pytest.raises(OverflowError):
        qap_eval(q, P.identity(2))


def test_rejects_non_integer_weights():
    with pytest.raises(ValueError):
        LopInstance([[0.5, 0], [0, 0]])


# -- parsing -----------------------------------------------------------------------


def test_parse_lolib_examples():
    assert parse_lolib("2\n0 5\n3 0\n") == LopInstance([[0, 5], [3, 0]])
    assert parse_lolib(b"1\n0\n").n == 1
    named = parse_lolib("be75eec\n2\n0 5\n3 0\n")
    assert named.name == "be75eec" and named == LopInstance([[0, 5], [3, 0]])


def test_parse_qaplib_examples():
    inst = parse_qaplib("2\n\n0 1\n1 0\n\n0 2\n2 0\n")
    assert inst == QapInstance([[0, 1], [1, 0]], [[0, 2], [2, 0]])
    assert parse_qaplib("1\n4\n5\n").n == 1
    # free layout: a matrix row may wrap over several lines
    assert parse_qaplib("2\n0\n1 1\n0 0 2 2 0\n") == inst


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("2\n0 5\n3\n", 3, 2),
        ("2\n0 x\n3 0\n", 2, 3),
        ("0\n", 1, 1),
        ("-3\n", 1, 1),
        ("2\n0 5\n3 0\n9\n", 4, 1),
        ("", 1, 1),
    ],
)
def test_parse_lolib_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_lolib(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_parse_qaplib_shortfall():
    with pytest.raises(ParseError):
        parse_qaplib("2\n0 1\n1 0\n0 2\n")
    with pytest.raises(ParseError):
        parse_qaplib("2\n0 1\n1 0\n0 2\n2 0\n7\n")
    with pytest.raises(ParseError):
        parse_qaplib("1\n99999999999999999999\n1\n")


@given(st.integers(1, 7), st.integers(0, 2**32 - 1), st.booleans())
def test_render_parse_roundtrip_property(n, seed, lop):
    rng = np.random.default_rng(seed)
    if lop:
        inst = random_lop(rng, n, -(10**12), 10**12)
        assert parse_lolib(render_lolib(inst)) == inst
    else:
        inst = random_qap(rng, n, -(10**9), 10**9)
        assert parse_qaplib(render_qaplib(inst)) == inst


def test_load_instance(tmp_path):
    f = tmp_path / "x.lop"
    f.write_text("2\n0 5\n3 0\n")
    assert load_instance(f, "lop").n == 2
    with pytest.raises(ValueError):
        load_instance(f, "tsp")


# -- subsampling ---------------------------------------------------------------------


def test_subsample():
    rng = np.random.default_rng(13)
    lop = random_lop(rng, 4)
    assert subsample(lop, 4, np.random.default_rng(0)) == lop
    one = subsample(lop, 1, np.random.default_rng(0))
    assert one.n == 1 and one.B[0, 0] in np.diag(lop.B)
    with pytest.raises(ValueError):
        subsample(lop, 5, rng)
    with pytest.raises(ValueError):
        subsample(lop, 0, rng)


def test_subsample_pinned_seed_matches_manual_extraction():
    B = np.arange(16).reshape(4, 4)
    A = B * 10
    idx = np.sort(np.random.default_rng(42).choice(4, size=2, replace=False))
    sub = subsample(QapInstance(A, B), 2, np.random.default_rng(42))
    rows = [[int(B[i, j]) for j in idx] for i in idx]
    assert sub.B.tolist() == rows
    assert sub.A.tolist() == [[10 * v for v in r] for r in rows]
    assert subsample(LopInstance(B), 2, np.random.default_rng(42)).B.tolist() == rows


# -- exhaustive search -----------------------------------------------------------


def test_exhaustive_examples():
    assert exhaustive_optimum(LopInstance([[0, 5], [3, 0]])) == (3, P((1, 2)))
    zero = QapInstance(np.zeros((4, 4), int), np.ones((4, 4), int))
    assert exhaustive_optimum(zero) == (0, P.identity(4))


def test_exhaustive_matches_brute_force_with_tie_break():
    rng = np.random.default_rng(14)
    for _ in range(10):
        n = int(rng.integers(1, 7))
        for inst in (random_lop(rng, n, 0, 3), random_qap(rng, n, 0, 3)):
            assert exhaustive_optimum(inst) == brute_force(inst)


def test_exhaustive_beats_random_permutations():
    rng = np.random.default_rng(15)
    inst = random_qap(rng, 8)
    best, sigma = exhaustive_optimum(inst)
    assert evaluate(inst, sigma) == best
    for _ in range(1000):
        assert best <= evaluate(inst, sample_uniform_permutation(8, rng))


def test_exhaustive_size_guard():
    with pytest.raises(UnsupportedOperation):
        exhaustive_optimum(LopInstance(np.zeros((12, 12), int)))


def test_invalid_utf8_reports_position():
    with pytest.raises(ParseError) as err:
        parse_lolib(b"2\n0 5\n3 \xff\n")
    assert (err.value.line, err.value.column) == (3, 3)
