"""Compiled inner loops for the search heuristics.

These mirror the reference implementations in :mod:`lehmer_ea.algorithms`
but work on raw int64 arrays and update fitness incrementally, which is what
makes the statistical validations affordable. Every run draws from its own
``numpy.random.Generator`` passed in by the caller.

Array conventions (all 0-based):
  * Lehmer code: ``x[k]`` is the entry of label ``n - k``, domain ``[0, n-k-1]``.
  * permutation: ``p[i]`` is ``sigma(i+1) - 1``.
  * [n]^n vector: ``v[i]`` is x_{i+1}; index n-1 is most significant for NVal.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

OBJ_ONEMAX = 0
OBJ_LZ = 1
OBJ_FACVAL = 2
OBJ_INV = 3
OBJ_PLO = 4
OBJ_LEXVAL = 5
OBJ_NVAL = 6
OBJ_LOP = 7
OBJ_QAP = 8

STEP_UNIFORM = 0
STEP_UNIT = 1
STEP_HARMONIC = 2

SCHEME_TRANSPOSITION = 0
SCHEME_ADJACENT = 1
SCHEME_INSERTION = 2

LEHMER_OBJECTIVES = (OBJ_ONEMAX, OBJ_LZ, OBJ_FACVAL, OBJ_LOP, OBJ_QAP)
PERM_OBJECTIVES = (OBJ_INV, OBJ_PLO, OBJ_LEXVAL, OBJ_LOP, OBJ_QAP)
KEY_OBJECTIVES = (OBJ_FACVAL, OBJ_LEXVAL, OBJ_NVAL)


# -- random helpers -----------------------------------------------------------


@njit(cache=True)
def randbelow(rng, k):
    """Uniform integer in [0, k) from one double; bias at most k * 2**-53."""
    return int(rng.random() * k)


@njit(cache=True)
def shuffle_identity(rng, out, n):
    for i in range(n):
        out[i] = i
    for i in range(n - 1, 0, -1):
        j = randbelow(rng, i + 1)
        t = out[i]
        out[i] = out[j]
        out[j] = t


@njit(cache=True)
def poisson1(rng):
    """Poi(1) by sequential search over the CDF."""
    u = rng.random()
    k = 0
    p = math.exp(-1.0)
    cdf = p
    while u > cdf:
        k += 1
        p /= k
        cdf += p
        if p == 0.0:
            break
    return k


@njit(cache=True)
def step_value(rng, step, label, x, cum_h):
    if step == STEP_UNIFORM:
        r = randbelow(rng, label - 1)
        if r >= x:
            r += 1
        return r
    if step == STEP_UNIT:
        if rng.random() < 0.5:
            return max(0, x - 1)
        return min(label - 1, x + 1)
    # harmonic: cum_h[j] = H_j
    u = rng.random() * cum_h[label - 1]
    j = np.searchsorted(cum_h, u, side="right")
    if j > label - 1:
        j = label - 1
    if rng.random() < 0.5:
        return max(0, x - j)
    return min(label - 1, x + j)


@njit(cache=True)
def next_skip(rng, log_q):
    """Gap to the next mutated position for per-position rate p, log_q = log(1-p)."""
    if log_q == -np.inf:
        return 0
    u = 1.0 - rng.random()
    return int(math.floor(math.log(u) / log_q))


# -- full evaluations ---------------------------------------------------------


@njit(cache=True)
def lz_full(x, n):
    for k in range(n - 1):
        if x[k] != 0:
            return k
    return n


@njit(cache=True)
def decode_code(x, n, out, pool):
    for v in range(n):
        pool[v] = v
    size = n
    for k in range(n):
        c = x[k] if k < n - 1 else 0
        out[k] = pool[c]
        for t in range(c, size - 1):
            pool[t] = pool[t + 1]
        size -= 1


@njit(cache=True)
def inversions_full(p, n, tree):
    for i in range(n + 1):
        tree[i] = 0
    total = 0
    for i in range(n - 1, -1, -1):
        j = p[i]  # count already-seen values < p[i]
        s = 0
        while j > 0:
            s += tree[j]
            j -= j & -j
        total += s
        j = p[i] + 1
        while j <= n:
            tree[j] += 1
            j += j & -j
    return total


@njit(cache=True)
def plo_full(p, n):
    for i in range(n):
        if p[i] != i:
            return i
    return n


@njit(cache=True)
def lop_full(p, n, B):
    s = 0
    for i in range(1, n):
        row = B[p[i]]
        for j in range(i):
            s += row[p[j]]
    return s


@njit(cache=True)
def qap_full(p, n, A, B):
    s = 0
    for i in range(n):
        bi = B[p[i]]
        for j in range(n):
            s += A[i, j] * bi[p[j]]
    return s


@njit(cache=True)
def perm_value(obj, p, n, A, B, tree):
    if obj == OBJ_INV:
        return inversions_full(p, n, tree)
    if obj == OBJ_PLO:
        return plo_full(p, n)
    if obj == OBJ_LOP:
        return lop_full(p, n, B)
    if obj == OBJ_QAP:
        return qap_full(p, n, A, B)
    return 0


@njit(cache=True)
def is_identity(p, n):
    for i in range(n):
        if p[i] != i:
            return False
    return True


@njit(cache=True)
def reached(f, target, maximize):
    if maximize:
        return f >= target
    return f <= target


# -- Lehmer-space RLS and (1+1)-EA -------------------------------------------


@njit(cache=True)
def lehmer_run(
    n, obj, step, ea, cum_p, cum_h, budget, has_target, target, maximize,
    count_noop, rng, init, A, B,
):
    """One run of RLS (``ea=False``) or the (1+1)-EA in L_n.

    ``cum_p`` is the cumulative label-selection vector over labels 2..n (RLS
    only; empty means uniform). FacVal only supports the all-zero target. Returns
    (evaluations, success, fitness, final code).
    """
    m = n - 1
    x = np.empty(m, dtype=np.int64)
    if init.shape[0] == m:
        x[:] = init
    else:
        for k in range(m):
            x[k] = randbelow(rng, n - k)
    y = x.copy()
    ks = np.empty(max(m, 1), dtype=np.int64)
    vs = np.empty(max(m, 1), dtype=np.int64)
    perm = np.empty(n, dtype=np.int64)
    pool = np.empty(n, dtype=np.int64)
    tree = np.empty(n + 1, dtype=np.int64)

    # `f` is the fitness for integer objectives; `ones` tracks the entry sum
    # so FacVal can detect the all-zero optimum.
    ones = 0
    for k in range(m):
        ones += x[k]
    if obj == OBJ_ONEMAX or obj == OBJ_FACVAL:
        f = ones
    elif obj == OBJ_LZ:
        f = lz_full(x, n)
    else:
        decode_code(x, n, perm, pool)
        f = perm_value(obj, perm, n, A, B, tree)

    evals = 1
    if obj == OBJ_FACVAL:
        success = has_target and ones == 0
    else:
        success = has_target and reached(f, target, maximize)
    log_q = math.log1p(-1.0 / m) if m > 1 else -np.inf

    while evals < budget and not success:
        cnt = 0
        if ea:
            k = next_skip(rng, log_q)
            while k < m:
                v = step_value(rng, step, n - k, x[k], cum_h)
                if v != x[k]:
                    ks[cnt] = k
                    vs[cnt] = v
                    cnt += 1
                k += 1 + next_skip(rng, log_q)
        else:
            if cum_p.shape[0] == 0:
                idx = randbelow(rng, m)
            else:
                idx = np.searchsorted(cum_p, rng.random(), side="right")
                if idx > m - 1:
                    idx = m - 1
            k = m - 1 - idx  # label idx+2 sits at array index n-(idx+2)
            v = step_value(rng, step, n - k, x[k], cum_h)
            if v != x[k]:
                ks[0] = k
                vs[0] = v
                cnt = 1
        if cnt == 0 and not count_noop:
            continue
        evals += 1
        if cnt == 0:
            continue

        dsum = 0
        for c in range(cnt):
            dsum += vs[c] - x[ks[c]]
            y[ks[c]] = vs[c]

        if obj == OBJ_ONEMAX:
            fn = f + dsum
            accept = fn <= f
        elif obj == OBJ_FACVAL:
            # ks ascends, so ks[0] is the most significant changed digit.
            fn = f + dsum
            accept = vs[0] < x[ks[0]]
        elif obj == OBJ_LZ:
            # z: index of the first nonzero entry of x (m if none)
            z = f if f < n else m
            k0 = ks[0]
            if k0 < z:
                fn = k0
            elif k0 > z or y[k0] != 0:
                fn = f
            else:
                fn = lz_full(y, n)
            accept = fn >= f
        else:
            decode_code(y, n, perm, pool)
            fn = perm_value(obj, perm, n, A, B, tree)
            if maximize:
                accept = fn >= f
            else:
                accept = fn <= f

        if accept:
            for c in range(cnt):
                x[ks[c]] = vs[c]
            ones += dsum
            f = fn
            if obj == OBJ_FACVAL:
                success = has_target and ones == 0
            elif has_target:
                success = reached(f, target, maximize)
        else:
            for c in range(cnt):
                y[ks[c]] = x[ks[c]]
    return evals, success, f, x


# -- (1+1)-EA on [n]^n (NVal) --------------------------------------------------


@njit(cache=True)
def nval_run(n, budget, has_target, rng, init):
    """(1+1)-EA with uniform steps and rate 1/n, minimizing NVal."""
    x = np.empty(n, dtype=np.int64)
    if init.shape[0] == n:
        x[:] = init
    else:
        for i in range(n):
            x[i] = randbelow(rng, n)
    nonzero = 0
    for i in range(n):
        if x[i] != 0:
            nonzero += 1
    evals = 1
    success = has_target and nonzero == 0
    if n == 1:
        return evals, success, x
    ks = np.empty(n, dtype=np.int64)
    vs = np.empty(n, dtype=np.int64)
    no_h = np.zeros(1)
    log_q = math.log1p(-1.0 / n)
    while evals < budget and not success:
        cnt = 0
        k = next_skip(rng, log_q)
        while k < n:
            v = step_value(rng, STEP_UNIFORM, n, x[k], no_h)
            ks[cnt] = k
            vs[cnt] = v
            cnt += 1
            k += 1 + next_skip(rng, log_q)
        evals += 1
        if cnt == 0:
            continue
        # highest index is the most significant digit
        top = cnt - 1
        if vs[top] < x[ks[top]]:
            for c in range(cnt):
                i = ks[c]
                if x[i] != 0:
                    nonzero -= 1
                if vs[c] != 0:
                    nonzero += 1
                x[i] = vs[c]
            success = has_target and nonzero == 0
    return evals, success, x


# -- permutation (1+1)-EA ------------------------------------------------------


@njit(cache=True)
def apply_moves(rng, y, n, scheme, k):
    for _ in range(k):
        if scheme == SCHEME_TRANSPOSITION:
            i = randbelow(rng, n)
            j = randbelow(rng, n - 1)
            if j >= i:
                j += 1
            t = y[i]
            y[i] = y[j]
            y[j] = t
        elif scheme == SCHEME_ADJACENT:
            i = randbelow(rng, n - 1)
            t = y[i]
            y[i] = y[i + 1]
            y[i + 1] = t
        else:
            i = randbelow(rng, n)
            j = randbelow(rng, n - 1)
            if j >= i:
                j += 1
            t = y[i]
            if i < j:
                for q in range(i, j):
                    y[q] = y[q + 1]
            else:
                for q in range(i, j, -1):
                    y[q] = y[q - 1]
            y[j] = t


@njit(cache=True)
def lex_cmp(a, b, n):
    for i in range(n):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    return 0


@njit(cache=True)
def perm_run(
    n, obj, scheme, poisson_offset, budget, has_target, target, maximize,
    count_noop, rng, init, A, B,
):
    """One run of the permutation (1+1)-EA with Poi(1)+offset elementary moves."""
    x = np.empty(n, dtype=np.int64)
    if init.shape[0] == n:
        x[:] = init
    else:
        shuffle_identity(rng, x, n)
    y = x.copy()
    tree = np.empty(n + 1, dtype=np.int64)
    if obj == OBJ_LEXVAL:
        f = 0
        success = has_target and is_identity(x, n)
    else:
        f = perm_value(obj, x, n, A, B, tree)
        success = has_target and reached(f, target, maximize)
    evals = 1
    while evals < budget and not success:
        k = poisson1(rng) + poisson_offset
        apply_moves(rng, y, n, scheme, k)
        same = True
        for i in range(n):
            if y[i] != x[i]:
                same = False
                break
        if same:
            if count_noop:
                evals += 1
            continue
        evals += 1
        if obj == OBJ_LEXVAL:
            accept = lex_cmp(y, x, n) <= 0
            fn = 0
        else:
            fn = perm_value(obj, y, n, A, B, tree)
            if maximize:
                accept = fn >= f
            else:
                accept = fn <= f
        if accept:
            x[:] = y
            f = fn
            if obj == OBJ_LEXVAL:
                success = has_target and is_identity(x, n)
            elif has_target:
                success = reached(f, target, maximize)
        else:
            y[:] = x
    return evals, success, f, x


# -- exhaustive search ---------------------------------------------------------


@njit(cache=True)
def next_permutation(p, n):
    i = n - 2
    while i >= 0 and p[i] >= p[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while p[j] <= p[i]:
        j -= 1
    t = p[i]
    p[i] = p[j]
    p[j] = t
    lo = i + 1
    hi = n - 1
    while lo < hi:
        t = p[lo]
        p[lo] = p[hi]
        p[hi] = t
        lo += 1
        hi -= 1
    return True


@njit(cache=True)
def exhaustive_search(obj, A, B):
    """Minimum of LOP/QAP over S_n in lexicographic order (first minimizer kept)."""
    n = B.shape[0]
    p = np.arange(n)
    tree = np.empty(n + 1, dtype=np.int64)
    best = perm_value(obj, p, n, A, B, tree)
    best_p = p.copy()
    while next_permutation(p, n):
        v = perm_value(obj, p, n, A, B, tree)
        if v < best:
            best = v
            best_p[:] = p
    return best, best_p


# -- random walk used by the hitting-time check ----------------------------------


@njit(cache=True)
def walk_hitting_times(i, samples, rng, x0):
    """Fair walk on {0..i-1}: absorbing at 0, lazy reflection at i-1.

    ``x0 < 0`` draws the start uniformly from {0..i-1}.
    """
    out = np.empty(samples, dtype=np.int64)
    for s in range(samples):
        x = randbelow(rng, i) if x0 < 0 else x0
        t = 0
        while x != 0:
            if rng.random() < 0.5:
                x -= 1
            elif x < i - 1:
                x += 1
            t += 1
        out[s] = t
    return out
