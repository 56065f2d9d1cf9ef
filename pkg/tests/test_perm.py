import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lehmer_ea.perm import (
    SCHEMES,
    Permutation,
    apply_adjacent_swap,
    apply_jump,
    apply_transposition,
    compose,
    inversions,
    mutate_permutation,
    sample_uniform_permutation,
)


def naive_inversions(sigma):
    v = sigma.values
    return sum(1 for i in range(len(v)) for j in range(i + 1, len(v)) if v[i] > v[j])


@st.composite
def permutations(draw, min_n=1, max_n=40):
    n = draw(st.integers(min_n, max_n))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


P = Permutation


# -- type --------------------------------------------------------------------------


@pytest.mark.parametrize("bad", [(), (0, 1), (1, 1), (1, 3), (2, 3)])
def test_rejects_non_bijections(bad):
    with pytest.raises(ValueError):
        Permutation(bad)


def test_parse_and_str_roundtrip():
    s = P.parse("3,5,4,1,2")
    assert s.values == (3, 5, 4, 1, 2)
    assert str(s) == "3,5,4,1,2"
    assert s(1) == 3 and s(5) == 2


# -- compose ------------------------------------------------------------------------


def test_compose_examples():
    assert compose(P.identity(3), P((3, 1, 2))) == P((3, 1, 2))
    assert compose(P((2, 3, 1)), P((2, 3, 1))) == P((3, 1, 2))


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        compose(P.identity(3), P.identity(4))


@given(permutations())
def test_compose_with_inverse_is_identity(s):
    assert compose(s, s.inverse()).is_identity()
    assert compose(s.inverse(), s).is_identity()


@given(permutations(max_n=12), st.data())
def test_compose_pointwise(s, data):
    t = data.draw(permutations(min_n=s.n, max_n=s.n))
    c = compose(t, s)
    assert all(c(i) == t(s(i)) for i in range(1, s.n + 1))


# -- inversions -------------------------------------------------------------------------


def test_inversion_examples():
    assert inversions(P.identity(5)) == 0
    assert inversions(P((5, 4, 3, 2, 1))) == 10
    assert inversions(P((3, 5, 4, 1, 2))) == 7


def test_inversions_match_double_loop_oracle():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        s = sample_uniform_permutation(int(rng.integers(1, 201)), rng)
        assert inversions(s) == naive_inversions(s)


@given(permutations())
def test_inversion_range(s):
    assert 0 <= inversions(s) <= s.n * (s.n - 1) // 2


# -- moves ------------------------------------------------------------------------


def test_adjacent_swap_examples():
    assert apply_adjacent_swap(P((1, 2, 3)), 1) == P((2, 1, 3))
    assert apply_adjacent_swap(P((3, 5, 4, 1, 2)), 1) == P((5, 3, 4, 1, 2))


@pytest.mark.parametrize("i", [0, 3, -1])
def test_adjacent_swap_out_of_range(i):
    with pytest.raises(ValueError):
        apply_adjacent_swap(P.identity(3), i)


def test_adjacent_swap_changes_inversions_by_one():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        s = sample_uniform_permutation(20, rng)
        i = int(rng.integers(1, 20))
        assert abs(inversions(apply_adjacent_swap(s, i)) - inversions(s)) == 1


def test_jump_examples():
    assert apply_jump(P((1, 2, 3, 4)), 1, 3) == P((2, 3, 1, 4))
    assert apply_jump(P((1, 2, 3, 4)), 3, 1) == P((3, 1, 2, 4))


@pytest.mark.parametrize("i,j", [(2, 2), (0, 1), (1, 5)])
def test_jump_bad_indices(i, j):
    with pytest.raises(ValueError):
        apply_jump(P.identity(4), i, j)


def test_transposition_examples():
    assert apply_transposition(P((1, 2, 3, 4)), 1, 4) == P((4, 2, 3, 1))


@pytest.mark.parametrize("i,j", [(2, 2), (0, 1), (1, 5)])
def test_transposition_bad_indices(i, j):
    with pytest.raises(ValueError):
        apply_transposition(P.identity(4), i, j)


@given(permutations(min_n=2, max_n=12), st.data())
def test_transposition_is_involution(s, data):
    i, j = data.draw(st.lists(st.integers(1, s.n), min_size=2, max_size=2, unique=True))
    assert apply_transposition(apply_transposition(s, i, j), i, j) == s


@given(permutations(min_n=2, max_n=12), st.data())
def test_jump_moves_value(s, data):
    i, j = data.draw(st.lists(st.integers(1, s.n), min_size=2, max_size=2, unique=True))
    r = apply_jump(s, i, j)
    assert r(j) == s(i)
    assert sorted(r.values) == sorted(s.values)


def test_moves_preserve_bijection():
    rng = np.random.default_rng(3)
    s = sample_uniform_permutation(15, rng)
    for t in range(10_000):
        scheme = SCHEMES[t % 3]
        s = mutate_permutation(s, scheme, 1, rng)
        assert sorted(s.values) == list(range(1, 16))


@pytest.mark.parametrize("n", range(2, 7))
def test_jump_is_chain_of_adjacent_swaps(n):
    for s in itertools.permutations(range(1, n + 1)):
        s = P(s)
        for i, j in itertools.permutations(range(1, n + 1), 2):
            t = s
            if i < j:
                for k in range(i, j):
                    t = apply_adjacent_swap(t, k)
            else:
                for k in range(i - 1, j - 1, -1):
                    t = apply_adjacent_swap(t, k)
            assert apply_jump(s, i, j) == t


def jump_or_stay(s, i, j):
    # jump(i, i) is the identity permutation
    return s if i == j else apply_jump(s, i, j)


@pytest.mark.parametrize("n", range(2, 7))
def test_transposition_is_two_jumps(n):
    for s in itertools.permutations(range(1, n + 1)):
        s = P(s)
        for i, j in itertools.combinations(range(1, n + 1), 2):
            assert apply_transposition(s, i, j) == jump_or_stay(apply_jump(s, i, j), j - 1, i)


# -- mutation and sampling -------------------------------------------------------------


@pytest.mark.parametrize("scheme", SCHEMES)
def test_mutate_k0_is_identity(scheme):
    s = P((3, 5, 4, 1, 2))
    assert mutate_permutation(s, scheme, 0, np.random.default_rng(0)) == s


def test_mutate_rejects_unknown_scheme_and_negative_k():
    with pytest.raises(ValueError):
        mutate_permutation(P.identity(3), "bogus", 1, np.random.default_rng(0))
    with pytest.raises(ValueError):
        mutate_permutation(P.identity(3), "insertion", -1, np.random.default_rng(0))


def test_single_adjacent_swap_of_identity_has_one_inversion():
    rng = np.random.default_rng(4)
    for _ in range(200):
        assert inversions(mutate_permutation(P.identity(9), "adjacent-swap", 1, rng)) == 1


def test_transposition_distribution_n3():
    rng = np.random.default_rng(5)
    draws = 100_000
    c = Counter(mutate_permutation(P.identity(3), "transposition", 1, rng).values for _ in range(draws))
    assert set(c) == {(2, 1, 3), (3, 2, 1), (1, 3, 2)}
    for v in c.values():
        assert abs(v / draws - 1 / 3) < 0.02


def test_uniform_sampling_small():
    rng = np.random.default_rng(6)
    assert all(sample_uniform_permutation(1, rng) == P((1,)) for _ in range(10))
    draws = 100_000
    c = Counter(sample_uniform_permutation(3, rng).values for _ in range(draws))
    assert len(c) == 6
    for v in c.values():
        assert abs(v / draws - 1 / 6) < 0.01
    for _ in range(100):
        s = sample_uniform_permutation(100, rng)
        assert sorted(s.values) == list(range(1, 101))
