import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from lehmer_ea.lehmer import (
    BoundedIntVector,
    LehmerCode,
    adjacent_swap_effect,
    decode,
    encode,
    harmonic_step_size,
    probability_vector,
    sample_uniform_code,
    step_harmonic,
    step_uniform,
    step_unit,
)
from lehmer_ea.perm import Permutation, apply_adjacent_swap, inversions, sample_uniform_permutation

P = Permutation


def oracle_encode(sigma):
    """Later-smaller counts straight from the definition, label n first."""
    v = sigma.values
    n = len(v)
    return tuple(sum(1 for j in range(i + 1, n) if v[j] < v[i]) for i in range(n - 1))


def oracle_decode(code):
    """List-removal decoding: position p takes the (c+1)-th smallest remaining value."""
    remaining = list(range(1, code.n + 1))
    out = [remaining.pop(c) for c in code.entries]
    return P(tuple(out + remaining))


def all_codes(n):
    for ent in itertools.product(*[range(n - k) for k in range(n - 1)]):
        yield LehmerCode(n, ent)


@st.composite
def codes(draw, min_n=1, max_n=60):
    n = draw(st.integers(min_n, max_n))
    return LehmerCode(n, [draw(st.integers(0, n - 1 - k)) for k in range(n - 1)])


# -- types ----------------------------------------------------------------------


def test_code_validation():
    with pytest.raises(ValueError):
        LehmerCode(3, (3, 0))
    with pytest.raises(ValueError):
        LehmerCode(3, (0,))
    with pytest.raises(ValueError):
        LehmerCode(0, ())
    c = LehmerCode.parse("2,3,2,0")
    assert c.n == 5 and c[5] == 2 and c[4] == 3 and c[3] == 2 and c[2] == 0 and c[1] == 0
    assert str(c) == "2,3,2,0"


def test_bounded_vector_validation():
    assert BoundedIntVector(3, (2, 0, 1)).length == 3
    with pytest.raises(ValueError):
        BoundedIntVector(3, (3, 0, 1))


# -- encode / decode --------------------------------------------------------------


def test_encode_examples():
    assert encode(P((3, 5, 4, 1, 2))).entries == (2, 3, 2, 0)
    assert encode(P.identity(7)) == LehmerCode.zeros(7)
    rev = encode(P(tuple(range(8, 0, -1))))
    assert all(rev[i] == i - 1 for i in range(2, 9))


def test_decode_examples():
    assert decode(LehmerCode.zeros(5)) == P.identity(5)
    assert decode(LehmerCode(5, (2, 3, 2, 0))) == P((3, 5, 4, 1, 2))


@pytest.mark.parametrize("n", range(1, 9))
def test_bijection_exhaustive(n):
    seen = set()
    for code in all_codes(n):
        sigma = decode(code)
        assert encode(sigma) == code
        seen.add(sigma.values)
    assert len(seen) == len(list(itertools.permutations(range(n))))


@pytest.mark.parametrize("n", [50, 200])
def test_bijection_random_large(n):
    rng = np.random.default_rng(n)
    for _ in range(300):
        s = sample_uniform_permutation(n, rng)
        assert decode(encode(s)) == s
        c = sample_uniform_code(n, rng)
        assert encode(decode(c)) == c


@given(codes())
def test_encode_decode_match_oracles(c):
    s = decode(c)
    assert s == oracle_decode(c)
    assert encode(s).entries == oracle_encode(s)


@given(codes())
def test_sum_of_entries_is_inversions(c):
    assert sum(c.entries) == inversions(decode(c))


@pytest.mark.parametrize("n", range(2, 8))
def test_descent_iff_entry_descent(n):
    for code in all_codes(n):
        s = decode(code)
        for i in range(1, n):
            assert (s(i) > s(i + 1)) == (code[n - i + 1] > code[n - i])


def test_uniform_code_gives_uniform_permutation():
    rng = np.random.default_rng(7)
    draws = 100_000
    c = Counter(decode(sample_uniform_code(4, rng)).values for _ in range(draws))
    assert len(c) == 24
    assert stats.chisquare(list(c.values())).pvalue > 1e-3


# -- step operators ----------------------------------------------------------------


def freq(fn, label, x, draws=100_000, seed=0):
    rng = np.random.default_rng(seed)
    c = Counter(fn(label, x, rng) for _ in range(draws))
    return {k: v / draws for k, v in c.items()}


@pytest.mark.parametrize("fn", [step_uniform, step_unit, step_harmonic])
def test_steps_reject_label_below_two(fn):
    with pytest.raises(ValueError):
        fn(1, 0, np.random.default_rng(0))


def test_step_uniform():
    rng = np.random.default_rng(0)
    assert all(step_uniform(2, 0, rng) == 1 for _ in range(50))
    assert all(step_uniform(2, 1, rng) == 0 for _ in range(50))
    f = freq(step_uniform, 5, 2)
    assert set(f) == {0, 1, 3, 4}
    assert all(abs(p - 0.25) < 0.01 for p in f.values())


def test_step_unit():
    f = freq(step_unit, 5, 0)
    assert set(f) == {0, 1} and abs(f[0] - 0.5) < 0.01
    f = freq(step_unit, 5, 4)
    assert set(f) == {3, 4} and abs(f[4] - 0.5) < 0.01
    f = freq(step_unit, 5, 2)
    assert set(f) == {1, 3} and abs(f[1] - 0.5) < 0.01


def test_step_harmonic_boundaries():
    f = freq(step_harmonic, 2, 0)
    assert set(f) == {0, 1} and abs(f[0] - 0.5) < 0.01
    f = freq(step_harmonic, 3, 0)
    assert abs(f[0] - 1 / 2) < 0.01
    assert abs(f[1] - 1 / 3) < 0.01
    assert abs(f[2] - 1 / 6) < 0.01


def test_harmonic_step_size_marginal():
    rng = np.random.default_rng(8)
    draws = 100_000
    c = Counter(harmonic_step_size(6, rng) for _ in range(draws))
    assert set(c) == {1, 2, 3, 4, 5}
    w = np.array([1 / j for j in range(1, 6)])
    expected = draws * w / w.sum()
    assert stats.chisquare([c[j] for j in range(1, 6)], expected).pvalue > 1e-3


@given(st.integers(2, 40), st.data(), st.integers(0, 2**32 - 1))
def test_steps_stay_in_domain(label, data, seed):
    x = data.draw(st.integers(0, label - 1))
    rng = np.random.default_rng(seed)
    for fn in (step_uniform, step_unit, step_harmonic):
        assert 0 <= fn(label, x, rng) <= label - 1


# -- probability vectors --------------------------------------------------------------


def test_probability_vectors():
    assert np.allclose(probability_vector("uniform", 5), [0.25] * 4)
    assert np.allclose(probability_vector("proportional", 5), [0.1, 0.2, 0.3, 0.4])
    for kind in ("uniform", "proportional"):
        assert np.allclose(probability_vector(kind, 2), [1.0])
        for n in (3, 17, 200):
            assert abs(probability_vector(kind, n).sum() - 1.0) < 1e-12
    with pytest.raises(ValueError):
        probability_vector("uniform", 1)
    with pytest.raises(ValueError):
        probability_vector("bogus", 4)


# -- adjacent swap in code space -----------------------------------------------------


def test_adjacent_swap_effect_examples():
    c = encode(P((3, 5, 4, 1, 2)))
    out = adjacent_swap_effect(c, 1)
    assert out[5] == 4 and out[4] == 2 and out[3] == 2 and out[2] == 0
    assert out == encode(P((5, 3, 4, 1, 2)))
    z = adjacent_swap_effect(LehmerCode.zeros(6), 1)
    assert z[6] == 1 and z == encode(P((2, 1, 3, 4, 5, 6)))


def test_adjacent_swap_effect_range():
    with pytest.raises(ValueError):
        adjacent_swap_effect(LehmerCode.zeros(4), 4)
    with pytest.raises(ValueError):
        adjacent_swap_effect(LehmerCode.zeros(4), 0)


def test_adjacent_swap_effect_exhaustive_n6():
    n = 6
    for code in all_codes(n):
        s = decode(code)
        for i in range(1, n):
            assert adjacent_swap_effect(code, i) == encode(apply_adjacent_swap(s, i))
