"""Permutations in one-line notation and their elementary moves.

Positions and values are 1-based at the API (``sigma(1)`` is the first
entry); the backing tuple is 0-based. All moves act on positions, i.e. they
right-multiply ``sigma`` by the move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SCHEMES = ("transposition", "adjacent-swap", "insertion")


@dataclass(frozen=True)
class Permutation:
    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        vals = tuple(int(v) for v in values)
        n = len(vals)
        if n < 1:
            raise ValueError("a permutation needs at least one element")
        if sorted(vals) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {vals}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def _trusted(cls, values: tuple[int, ...]) -> "Permutation":
        # Skips the bijection check for values produced by our own moves.
        obj = object.__new__(cls)
        object.__setattr__(obj, "values", values)
        return obj

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse a literal such as ``"3,5,4,1,2"`` (parentheses optional)."""
        body = text.strip().strip("()[]")
        try:
            return cls(int(tok) for tok in body.replace(" ", "").split(",") if tok)
        except ValueError as exc:
            raise ValueError(f"bad permutation literal {text!r}: {exc}") from None

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"position {i} outside 1..{self.n}")
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __str__(self) -> str:
        return ",".join(map(str, self.values))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for pos, v in enumerate(self.values, start=1):
            inv[v - 1] = pos
        return Permutation._trusted(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.values, start=1))


def compose(tau: Permutation, sigma: Permutation) -> Permutation:
    """Return ``tau o sigma``, i.e. ``i -> tau(sigma(i))``."""
    if tau.n != sigma.n:
        raise ValueError(f"size mismatch: {tau.n} vs {sigma.n}")
    t = tau.values
    return Permutation._trusted(tuple(t[s - 1] for s in sigma.values))


def _merge_count(a: list[int]) -> tuple[list[int], int]:
    if len(a) <= 1:
        return a, 0
    mid = len(a) // 2
    left, cl = _merge_count(a[:mid])
    right, cr = _merge_count(a[mid:])
    merged = []
    count = cl + cr
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            count += len(left) - i
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, count


def inversions(sigma: Permutation | Sequence[int]) -> int:
    """Number of pairs ``i < j`` with ``sigma(i) > sigma(j)`` (merge count)."""
    vals = sigma.values if isinstance(sigma, Permutation) else tuple(sigma)
    return _merge_count(list(vals))[1]


def _check_position(sigma: Permutation, i: int, name: str = "i") -> None:
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= sigma.n:
        raise ValueError(f"{name}={i} outside 1..{sigma.n}")


def apply_adjacent_swap(sigma: Permutation, i: int) -> Permutation:
    """``sigma o s_i``: exchange the entries at positions i and i+1."""
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= sigma.n - 1:
        raise ValueError(f"adjacent swap index {i} outside 1..{sigma.n - 1}")
    v = list(sigma.values)
    v[i - 1], v[i] = v[i], v[i - 1]
    return Permutation._trusted(tuple(v))


def apply_transposition(sigma: Permutation, i: int, j: int) -> Permutation:
    """``sigma o (i j)``: exchange the entries at positions i and j."""
    _check_position(sigma, i, "i")
    _check_position(sigma, j, "j")
    if i == j:
        raise ValueError("transposition needs i != j")
    v = list(sigma.values)
    v[i - 1], v[j - 1] = v[j - 1], v[i - 1]
    return Permutation._trusted(tuple(v))


def apply_jump(sigma: Permutation, i: int, j: int) -> Permutation:
    """Move the entry at position i to position j, shifting the ones between."""
    _check_position(sigma, i, "i")
    _check_position(sigma, j, "j")
    if i == j:
        raise ValueError("jump needs i != j")
    v = list(sigma.values)
    v.insert(j - 1, v.pop(i - 1))
    return Permutation._trusted(tuple(v))


def random_transposition(n: int, rng: np.random.Generator) -> tuple[int, int]:
    """Unordered pair {i, j}, uniform over the n(n-1)/2 pairs, returned i < j."""
    i, j = rng.choice(n, size=2, replace=False) + 1
    return (int(i), int(j)) if i < j else (int(j), int(i))


def random_jump(n: int, rng: np.random.Generator) -> tuple[int, int]:
    """Ordered pair (i, j), i != j, uniform over the n(n-1) ordered pairs."""
    i = int(rng.integers(1, n + 1))
    j = int(rng.integers(1, n))
    if j >= i:
        j += 1
    return i, j


def mutate_permutation(
    sigma: Permutation, scheme: str, k: int, rng: np.random.Generator
) -> Permutation:
    """Apply k independently sampled elementary moves of ``scheme`` in sequence."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown mutation scheme {scheme!r}; choose from {SCHEMES}")
    n = sigma.n
    if k == 0 or n == 1:
        return sigma
    v = list(sigma.values)
    for _ in range(k):
        if scheme == "transposition":
            i, j = random_transposition(n, rng)
            v[i - 1], v[j - 1] = v[j - 1], v[i - 1]
        elif scheme == "adjacent-swap":
            i = int(rng.integers(1, n))
            v[i - 1], v[i] = v[i], v[i - 1]
        else:
            i, j = random_jump(n, rng)
            v.insert(j - 1, v.pop(i - 1))
    return Permutation._trusted(tuple(v))


def sample_uniform_permutation(n: int, rng: np.random.Generator) -> Permutation:
    if n < 1:
        raise ValueError("n must be >= 1")
    return Permutation._trusted(tuple(int(v) + 1 for v in rng.permutation(n)))
