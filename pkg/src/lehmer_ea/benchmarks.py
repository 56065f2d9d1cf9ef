"""Theoretical benchmark functions over L_n, S_n and [n]^n.

Factorially and exponentially weighted functions (FacVal, LexVal, NVal) are
returned as :class:`LexKey` values. Comparing keys lexicographically is
exact because each digit's weight exceeds the largest possible total of all
less significant digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

from .lehmer import BoundedIntVector, LehmerCode, encode
from .perm import Permutation, inversions

INT64_MAX = 2**63 - 1


class UnsupportedOperation(Exception):
    """Raised when an operation is outside the range it is defined for."""


class Direction(enum.Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    def not_worse(self, candidate, incumbent) -> bool:
        if self is Direction.MINIMIZE:
            return candidate <= incumbent
        return candidate >= incumbent

    def better(self, candidate, incumbent) -> bool:
        if self is Direction.MINIMIZE:
            return candidate < incumbent
        return candidate > incumbent


@dataclass(frozen=True, order=True)
class LexKey:
    """Exact fitness key; ``digits`` are ordered most significant first.

    ``kind`` is ``"factorial"`` (digit k of an n-digit key has weight
    (n-1-k)!) or ``"radix"`` (weight base**(n-1-k)).
    """

    digits: tuple[int, ...]
    kind: str = field(default="factorial", compare=False)
    base: int = field(default=0, compare=False)

    def scalar(self) -> int:
        m = len(self.digits)
        if self.kind == "factorial":
            # m + 1 = n digits including the implicit label-1 zero.
            if m + 1 > 20:
                raise UnsupportedOperation(
                    f"scalar FacVal exceeds 64 bits for n={m + 1} (limit 20); compare keys instead"
                )
            return sum(d * math.factorial(m - k) for k, d in enumerate(self.digits))
        if self.base**m - 1 > INT64_MAX:
            raise UnsupportedOperation(
                f"scalar NVal exceeds 64 bits for n={self.base}; compare keys instead"
            )
        return sum(d * self.base ** (m - 1 - k) for k, d in enumerate(self.digits))

    def __str__(self) -> str:
        try:
            return str(self.scalar())
        except UnsupportedOperation:
            return ":".join(map(str, self.digits))


FitnessValue = Union[int, LexKey]


def l_onemax(code: LehmerCode) -> int:
    return sum(code.entries)


def l_leadingzeros(code: LehmerCode) -> int:
    """Length of the all-zero run from label n downward; n when all zero."""
    for k, e in enumerate(code.entries):
        if e != 0:
            return k
    return code.n


def facval(code: LehmerCode) -> LexKey:
    return LexKey(code.entries, "factorial")


def inv(sigma: Permutation) -> int:
    return inversions(sigma)


def pleadingones(sigma: Permutation) -> int:
    for i, v in enumerate(sigma.values, start=1):
        if v != i:
            return i - 1
    return sigma.n


def lexval(sigma: Permutation) -> LexKey:
    """Rank of ``sigma`` in lexicographic order of S_n, as a factorial key."""
    return facval(encode(sigma))


def nval(x: BoundedIntVector) -> LexKey:
    """sum_i n^(i-1) x_i with x_n most significant; needs bound == length."""
    if x.bound != x.length:
        raise ValueError(f"NVal is defined on [n]^n; got bound {x.bound}, length {x.length}")
    return LexKey(tuple(reversed(x.entries)), "radix", x.bound)


@dataclass(frozen=True)
class Benchmark:
    name: str
    space: str  # "lehmer" | "perm" | "vector"
    direction: Direction
    func: Callable

    def optimum(self, n: int) -> FitnessValue:
        if self.space == "lehmer":
            return self.func(LehmerCode.zeros(n))
        if self.space == "perm":
            return self.func(Permutation.identity(n))
        return self.func(BoundedIntVector(n, [0] * n))

    def evaluate_literal(self, text: str) -> FitnessValue:
        """Evaluate a comma-separated literal in this benchmark's space."""
        if self.space == "lehmer":
            return self.func(LehmerCode.parse(text))
        if self.space == "perm":
            return self.func(Permutation.parse(text))
        vals = [int(t) for t in text.split(",") if t.strip()]
        return self.func(BoundedIntVector(len(vals), vals))


BENCHMARKS: dict[str, Benchmark] = {
    b.name: b
    for b in (
        Benchmark("l-onemax", "lehmer", Direction.MINIMIZE, l_onemax),
        Benchmark("l-leadingzeros", "lehmer", Direction.MAXIMIZE, l_leadingzeros),
        Benchmark("facval", "lehmer", Direction.MINIMIZE, facval),
        Benchmark("inv", "perm", Direction.MINIMIZE, inv),
        Benchmark("pleadingones", "perm", Direction.MAXIMIZE, pleadingones),
        Benchmark("lexval", "perm", Direction.MINIMIZE, lexval),
        Benchmark("nval", "vector", Direction.MINIMIZE, nval),
    )
}


def get_benchmark(name: str) -> Benchmark:
    try:
        return BENCHMARKS[name]
    except KeyError:
        raise ValueError(f"unknown benchmark {name!r}; choose from {sorted(BENCHMARKS)}") from None
