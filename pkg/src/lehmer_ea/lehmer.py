"""Lehmer codes (inversion vectors), step operators and selection vectors.

A code for S_n has one entry per label ``i`` in ``n..2`` with value in
``[0, i-1]``; label 1 is always 0 and not stored. Entries are kept in
printing order, label n first, so permutation position ``p`` corresponds to
label ``n - p + 1`` and to index ``p - 1`` of :attr:`LehmerCode.entries`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .perm import Permutation

STEP_OPERATORS = ("uniform", "unit", "harmonic")
PROBABILITY_VECTORS = ("uniform", "proportional")


@dataclass(frozen=True)
class LehmerCode:
    n: int
    entries: tuple[int, ...]

    def __init__(self, n: int, entries: Iterable[int]):
        ent = tuple(int(e) for e in entries)
        if n < 1:
            raise ValueError("n must be >= 1")
        if len(ent) != n - 1:
            raise ValueError(f"a code for n={n} has {n - 1} entries, got {len(ent)}")
        for k, e in enumerate(ent):
            label = n - k
            if not 0 <= e <= label - 1:
                raise ValueError(f"entry {e} at label {label} outside [0, {label - 1}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", ent)

    @classmethod
    def _trusted(cls, n: int, entries: tuple[int, ...]) -> "LehmerCode":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "entries", entries)
        return obj

    @classmethod
    def zeros(cls, n: int) -> "LehmerCode":
        return cls._trusted(n, (0,) * (n - 1))

    @classmethod
    def parse(cls, text: str) -> "LehmerCode":
        """Parse ``"2,3,2,0"``: entries from label n down to label 2."""
        toks = [t for t in text.strip().strip("()[]").replace(" ", "").split(",") if t]
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise ValueError(f"bad Lehmer code literal {text!r}") from None
        return cls(len(vals) + 1, vals)

    def __getitem__(self, label: int) -> int:
        """Entry at ``label`` (1..n); label 1 is the implicit zero."""
        if label == 1 and self.n >= 1:
            return 0
        if not 2 <= label <= self.n:
            raise IndexError(f"label {label} outside 1..{self.n}")
        return self.entries[self.n - label]

    def at_position(self, p: int) -> int:
        """Entry belonging to permutation position ``p``, i.e. label n-p+1."""
        return self[self.n - p + 1]

    def replace(self, label: int, value: int) -> "LehmerCode":
        ent = list(self.entries)
        ent[self.n - label] = value
        return LehmerCode(self.n, ent)

    def __str__(self) -> str:
        return ",".join(map(str, self.entries))


@dataclass(frozen=True)
class BoundedIntVector:
    """Point of ``[r]^length``; ``entries[k]`` is the 1-based coordinate x_{k+1}."""

    bound: int
    entries: tuple[int, ...]

    def __init__(self, bound: int, entries: Iterable[int]):
        ent = tuple(int(e) for e in entries)
        if bound < 1 or not ent:
            raise ValueError("need bound >= 1 and at least one entry")
        if any(not 0 <= e < bound for e in ent):
            raise ValueError(f"entries must lie in [0, {bound - 1}]")
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "entries", ent)

    @property
    def length(self) -> int:
        return len(self.entries)


class _Fenwick:
    """Prefix counts over 1..n with O(log n) update, query and k-th lookup."""

    def __init__(self, n: int, full: bool = False):
        self.n = n
        self.tree = [0] * (n + 1)
        if full:
            for i in range(1, n + 1):
                self.tree[i] += 1
                j = i + (i & -i)
                if j <= n:
                    self.tree[j] += self.tree[i]
        self.top = 1 << n.bit_length()

    def add(self, i: int, delta: int) -> None:
        while i <= self.n:
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        s = 0
        while i > 0:
            s += self.tree[i]
            i -= i & -i
        return s

    def kth(self, k: int) -> int:
        """Smallest index whose prefix count reaches k (k >= 1)."""
        pos = 0
        step = self.top
        while step:
            nxt = pos + step
            if nxt <= self.n and self.tree[nxt] < k:
                pos = nxt
                k -= self.tree[nxt]
            step >>= 1
        return pos + 1


def encode(sigma: Permutation) -> LehmerCode:
    """Lehmer code: label n-i+1 holds #{j > i : sigma(j) < sigma(i)}."""
    n = sigma.n
    vals = sigma.values
    seen = _Fenwick(n)
    counts = [0] * n
    for p in range(n - 1, -1, -1):
        counts[p] = seen.prefix(vals[p] - 1)
        seen.add(vals[p], 1)
    return LehmerCode._trusted(n, tuple(counts[: n - 1]))


def decode(code: LehmerCode) -> Permutation:
    """Inverse of :func:`encode`: sigma(p) is the (c+1)-th smallest unused value."""
    n = code.n
    free = _Fenwick(n, full=True)
    out = []
    for c in code.entries + (0,):
        v = free.kth(c + 1)
        free.add(v, -1)
        out.append(v)
    return Permutation._trusted(tuple(out))


def _check_step_args(label: int, x: int) -> None:
    if label < 2:
        raise ValueError(f"step operators need label >= 2, got {label}")
    if not 0 <= x <= label - 1:
        raise ValueError(f"value {x} outside [0, {label - 1}]")


def step_uniform(label: int, x: int, rng: np.random.Generator) -> int:
    """Uniform draw from ``[0, label-1]`` without the current value."""
    _check_step_args(label, x)
    r = int(rng.integers(label - 1))
    return r + 1 if r >= x else r


def step_unit(label: int, x: int, rng: np.random.Generator) -> int:
    """+-1 with a fair coin, clamped into ``[0, label-1]``."""
    _check_step_args(label, x)
    if rng.random() < 0.5:
        return max(0, x - 1)
    return min(label - 1, x + 1)


@lru_cache(maxsize=None)
def _harmonic_cdf(m: int) -> np.ndarray:
    w = 1.0 / np.arange(1, m + 1)
    cdf = np.cumsum(w)
    return cdf / cdf[-1]


def harmonic_step_size(label: int, rng: np.random.Generator) -> int:
    """Step size j in ``[1, label-1]`` with probability proportional to 1/j."""
    cdf = _harmonic_cdf(label - 1)
    return int(np.searchsorted(cdf, rng.random(), side="right")) + 1


def step_harmonic(label: int, x: int, rng: np.random.Generator) -> int:
    """Harmonic step size, fair direction, result clamped into ``[0, label-1]``."""
    _check_step_args(label, x)
    j = harmonic_step_size(label, rng)
    if rng.random() < 0.5:
        return max(0, x - j)
    return min(label - 1, x + j)


STEPS = {"uniform": step_uniform, "unit": step_unit, "harmonic": step_harmonic}


def get_step(name: str):
    try:
        return STEPS[name]
    except KeyError:
        raise ValueError(f"unknown step operator {name!r}; choose from {STEP_OPERATORS}") from None


def probability_vector(kind: str, n: int) -> np.ndarray:
    """Label-selection probabilities for labels 2..n (element 0 is label 2)."""
    if n < 2:
        raise ValueError("probability vectors need n >= 2")
    labels = np.arange(2, n + 1, dtype=float)
    if kind == "uniform":
        return np.full(n - 1, 1.0 / (n - 1))
    if kind == "proportional":
        return 2.0 * (labels - 1.0) / (n * (n - 1.0))
    raise ValueError(f"unknown probability vector {kind!r}; choose from {PROBABILITY_VECTORS}")


def sample_uniform_code(n: int, rng: np.random.Generator) -> LehmerCode:
    """Independent uniform entry per label; decodes to a uniform permutation."""
    labels = np.arange(n, 1, -1)
    return LehmerCode._trusted(n, tuple(int(v) for v in rng.integers(0, labels)))


def adjacent_swap_effect(code: LehmerCode, i: int) -> LehmerCode:
    """Code of ``decode(code) o s_i`` computed without leaving code space."""
    n = code.n
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= n - 1:
        raise ValueError(f"position {i} outside 1..{n - 1}")
    hi = code[n - i + 1]
    lo = code[n - i]
    a = hi <= lo
    new_hi = lo + 1 if a else lo
    new_lo = hi if a else hi - 1
    ent = list(code.entries)
    ent[i - 1] = new_hi
    if i < n - 1:
        ent[i] = new_lo
    return LehmerCode._trusted(n, tuple(ent))

