"""Linear ordering (LOP) and quadratic assignment (QAP) instances.

Both problems are minimized. Weights are 64-bit signed integers; sums are
exact, and an :class:`OverflowError` is raised when a result leaves int64.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .benchmarks import INT64_MAX, UnsupportedOperation
from .perm import Permutation

INT64_MIN = -(2**63)
MAX_EXHAUSTIVE_N = 11


class ParseError(ValueError):
    """Malformed instance file; carries 1-based line/column of the culprit."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


def _as_matrix(m, name: str) -> np.ndarray:
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
        as_int = arr.astype(np.int64)
        if not np.array_equal(as_int, arr):
            raise ValueError(f"{name} must hold integers")
        arr = as_int
    arr = arr.astype(np.int64, copy=True)
    arr.setflags(write=False)
    return arr


def _max_abs(m: np.ndarray) -> int:
    return max(abs(int(m.max())), abs(int(m.min())))


@dataclass(frozen=True, eq=False)
class LopInstance:
    B: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "B", _as_matrix(self.B, "B"))

    @property
    def n(self) -> int:
        return self.B.shape[0]

    @property
    def int64_safe(self) -> bool:
        return _max_abs(self.B) * self.n * self.n <= INT64_MAX

    def __eq__(self, other):
        return isinstance(other, LopInstance) and np.array_equal(self.B, other.B)


@dataclass(frozen=True, eq=False)
class QapInstance:
    A: np.ndarray
    B: np.ndarray
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A, "A"))
        object.__setattr__(self, "B", _as_matrix(self.B, "B"))
        if self.A.shape != self.B.shape:
            raise ValueError(f"A and B differ in size: {self.A.shape} vs {self.B.shape}")

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def int64_safe(self) -> bool:
        return _max_abs(self.A) * _max_abs(self.B) * self.n * self.n <= INT64_MAX

    def __eq__(self, other):
        return (
            isinstance(other, QapInstance)
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.B, other.B)
        )


Instance = Union[LopInstance, QapInstance]


def _index(inst: Instance, sigma: Permutation) -> np.ndarray:
    if sigma.n != inst.n:
        raise ValueError(f"permutation size {sigma.n} does not match instance size {inst.n}")
    return np.fromiter(sigma.values, dtype=np.intp, count=sigma.n) - 1


def _checked(total: int) -> int:
    if not INT64_MIN <= total <= INT64_MAX:
        raise OverflowError(f"objective value {total} overflows int64")
    return total


def lop_eval(inst: LopInstance, sigma: Permutation) -> int:
    """Sum of b[sigma(i), sigma(j)] over all positions i > j."""
    s = _index(inst, sigma)
    P = inst.B[np.ix_(s, s)]
    if inst.int64_safe:
        return int(np.tril(P, -1).sum())
    return _checked(int(np.tril(P.astype(object), -1).sum()))


def qap_eval(inst: QapInstance, sigma: Permutation) -> int:
    """Sum of a[i, j] * b[sigma(i), sigma(j)] over all i, j (diagonal included)."""
    s = _index(inst, sigma)
    P = inst.B[np.ix_(s, s)]
    if inst.int64_safe:
        return int((inst.A * P).sum())
    return _checked(int((inst.A.astype(object) * P.astype(object)).sum()))


def evaluate(inst: Instance, sigma: Permutation) -> int:
    if isinstance(inst, LopInstance):
        return lop_eval(inst, sigma)
    return qap_eval(inst, sigma)


# -- file formats -----------------------------------------------------------

_TOKEN = re.compile(r"\S+")


def _tokens(text: bytes | str) -> list[tuple[str, int, int]]:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            head = text[: exc.start]
            line = head.count(b"\n") + 1
            column = exc.start - (head.rfind(b"\n") + 1) + 1
            raise ParseError(f"file is not valid UTF-8 text: {exc.reason}", line, column) from None
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for m in _TOKEN.finditer(line):
            out.append((m.group(), lineno, m.start() + 1))
    return out


def _to_int(tok: tuple[str, int, int]) -> int:
    s, line, col = tok
    try:
        v = int(s)
    except ValueError:
        raise ParseError(f"expected an integer, found {s!r}", line, col) from None
    if not INT64_MIN <= v <= INT64_MAX:
        raise ParseError(f"integer {s} does not fit in 64 bits", line, col)
    return v


def _read_size(tok: tuple[str, int, int]) -> int:
    n = _to_int(tok)
    if n <= 0:
        raise ParseError(f"instance size must be positive, got {n}", tok[1], tok[2])
    return n


def _read_matrix(toks, start: int, n: int, what: str) -> np.ndarray:
    need = n * n
    avail = len(toks) - start
    if avail < need:
        last = toks[-1] if toks else ("", 1, 1)
        raise ParseError(
            f"{what}: expected {need} entries for a {n}x{n} matrix, found {avail}",
            last[1],
            last[2] + len(last[0]),
        )
    vals = [_to_int(t) for t in toks[start : start + need]]
    return np.array(vals, dtype=np.int64).reshape(n, n)


def _reject_trailing(toks, used: int) -> None:
    if len(toks) > used:
        s, line, col = toks[used]
        raise ParseError(f"unexpected trailing token {s!r}", line, col)


def parse_lolib(text: bytes | str) -> LopInstance:
    """Parse an optional name line, the size n, then n*n row-major integers."""
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty file", 1, 1)
    name = ""
    start = 0
    first_line = toks[0][1]
    on_first = [t for t in toks if t[1] == first_line]
    if not (len(on_first) == 1 and re.fullmatch(r"[+-]?\d+", on_first[0][0])):
        # A first line that is not a lone integer is the instance name.
        name = " ".join(t[0] for t in on_first)
        start = len(on_first)
        if start >= len(toks):
            raise ParseError("missing instance size after name line", first_line + 1, 1)
    n = _read_size(toks[start])
    B = _read_matrix(toks, start + 1, n, "matrix B")
    _reject_trailing(toks, start + 1 + n * n)
    return LopInstance(B, name)


def parse_qaplib(text: bytes | str) -> QapInstance:
    """Parse n followed by the n*n matrices A and B (free whitespace layout)."""
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty file", 1, 1)
    n = _read_size(toks[0])
    A = _read_matrix(toks, 1, n, "matrix A")
    B = _read_matrix(toks, 1 + n * n, n, "matrix B")
    _reject_trailing(toks, 1 + 2 * n * n)
    return QapInstance(A, B)


def _rows(m: np.ndarray) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in m)


def render_lolib(inst: LopInstance) -> str:
    head = f"{inst.name}\n" if inst.name else ""
    return f"{head}{inst.n}\n{_rows(inst.B)}\n"


def render_qaplib(inst: QapInstance) -> str:
    return f"{inst.n}\n\n{_rows(inst.A)}\n\n{_rows(inst.B)}\n"


def load_instance(path, problem: str) -> Instance:
    with open(path, "rb") as fh:
        data = fh.read()
    if problem == "lop":
        return parse_lolib(data)
    if problem == "qap":
        return parse_qaplib(data)
    raise ValueError(f"unknown problem type {problem!r}; expected 'lop' or 'qap'")


# -- subsampling and exhaustive search --------------------------------------


def subsample(inst: Instance, m: int, rng: np.random.Generator) -> Instance:
    """Principal submatrix on a uniformly random m-subset of indices (sorted)."""
    if not 1 <= m <= inst.n:
        raise ValueError(f"subsample size {m} outside 1..{inst.n}")
    idx = np.sort(rng.choice(inst.n, size=m, replace=False))
    sub = np.ix_(idx, idx)
    if isinstance(inst, LopInstance):
        return LopInstance(inst.B[sub], inst.name)
    return QapInstance(inst.A[sub], inst.B[sub], inst.name)


def exhaustive_optimum(inst: Instance) -> tuple[int, Permutation]:
    """Minimum over all n! permutations; ties go to the lexicographically first."""
    from . import kernels

    if inst.n > MAX_EXHAUSTIVE_N:
        raise UnsupportedOperation(
            f"exhaustive search limited to n <= {MAX_EXHAUSTIVE_N}, instance has n={inst.n}"
        )
    if not inst.int64_safe:
        raise UnsupportedOperation("exhaustive search requires weights whose sums fit in int64")
    if isinstance(inst, LopInstance):
        best, perm = kernels.exhaustive_search(kernels.OBJ_LOP, inst.B, inst.B)
    else:
        best, perm = kernels.exhaustive_search(kernels.OBJ_QAP, inst.A, inst.B)
    return int(best), Permutation(int(v) + 1 for v in perm)
