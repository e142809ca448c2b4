"""Young diagrams, standard tableaux and hook lengths.

Exact counts use Python integers; statistics are kept in log space.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from ._backend import kernels

#: largest n for which :func:`syt_count` computes exact integers
EXACT_CAP = 200
#: largest n served by the cumulative ln k! table
LOG_FACTORIAL_CAP = 2_000_000


class Partition(tuple):
    """A Young shape: weakly decreasing positive parts.

    Behaves like the tuple of its parts.  ``str`` gives the comma form used
    on the command line and in CSV files, e.g. ``"5,3,2,1"``.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        for i, p in enumerate(parts):
            if p < 1:
                raise ValueError(f"partition parts must be positive, got {parts}")
            if i and p > parts[i - 1]:
                raise ValueError(f"partition parts must be weakly decreasing, got {parts}")
        return tuple.__new__(cls, parts)

    @classmethod
    def _trusted(cls, parts) -> "Partition":
        return tuple.__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(int(tok) for tok in text.split(","))
        except ValueError as exc:
            raise ValueError(f"bad partition {text!r}: {exc}") from None

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def n(self) -> int:
        return sum(self)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def __str__(self) -> str:
        return ",".join(map(str, self))

    def __repr__(self) -> str:
        return f"Partition({str(self)!r})"


def as_partition(shape) -> Partition:
    if isinstance(shape, Partition):
        return shape
    if isinstance(shape, str):
        return Partition.parse(shape)
    return Partition(shape)


def conjugate(shape) -> Partition:
    """Transpose of the diagram."""
    lam = as_partition(shape)
    if not lam:
        return lam
    return Partition._trusted(sum(1 for p in lam if p > j) for j in range(lam[0]))


def hook_lengths(shape) -> tuple[tuple[int, ...], ...]:
    """Hook length of every cell, row by row (arm + leg + 1)."""
    lam = as_partition(shape)
    conj = conjugate(lam)
    return tuple(
        tuple(lam[i] - j + conj[j] - i - 1 for j in range(lam[i])) for i in range(len(lam))
    )


def syt_count(shape, cap: int = EXACT_CAP) -> int:
    """Number of standard Young tableaux of the shape, exactly (n!/prod of hooks)."""
    lam = as_partition(shape)
    if lam.n > cap:
        raise ValueError(
            f"n = {lam.n} exceeds the exact-arithmetic cap {cap}; use log_dim for ln f"
        )
    prod = 1
    for row in hook_lengths(lam):
        for h in row:
            prod *= h
    count, rest = divmod(math.factorial(lam.n), prod)
    assert rest == 0
    return count


class _LogFactorialTable:
    """Cumulative ln k! table, grown on demand.

    Summation is compensated (Neumaier) so entries stay accurate to rounding
    even at n of a few million.  Growth builds a new list and publishes it with
    one reference assignment, so concurrent readers never see a partial table.
    """

    def __init__(self):
        self._values = [0.0]
        self._carry = (0.0, 0.0)  # (sum, compensation) at the last entry
        self._lock = threading.Lock()

    def __call__(self, n: int) -> float:
        values = self._values
        if 0 <= n < len(values):
            return values[n]
        if n < 0:
            raise ValueError("n must be non-negative")
        if n > LOG_FACTORIAL_CAP:
            raise ValueError(f"ln n! table is capped at n = {LOG_FACTORIAL_CAP}")
        with self._lock:
            values = self._values
            if n >= len(values):
                grown = list(values)
                total, comp = self._carry
                target = max(n + 1, 2 * len(values))
                target = min(target, LOG_FACTORIAL_CAP + 1)
                log = math.log
                for k in range(len(values), target):
                    term = log(k)
                    t = total + term
                    if abs(total) >= abs(term):
                        comp += (total - t) + term
                    else:
                        comp += (term - t) + total
                    total = t
                    grown.append(total + comp)
                self._carry = (total, comp)
                self._values = grown
            return self._values[n]


log_factorial = _LogFactorialTable()
log_factorial.__doc__ = "ln n! from a cumulative table (no Stirling approximation)."


def hook_log_sum(shape) -> float:
    """H = sum over cells of ln(hook).

    Accumulated in ascending hook order, so shapes with the same hook multiset
    (a shape and its conjugate, for instance) give bit-identical values.
    """
    return kernels.hook_log_sum(tuple(shape))


def log_dim(shape) -> float:
    """ln f^shape = ln n! - H."""
    lam = as_partition(shape)
    return log_factorial(lam.n) - hook_log_sum(lam)


def partitions_of(n: int) -> Iterator[Partition]:
    """Every partition of n once, in reverse-lexicographic order, streamed."""
    if n < 1:
        raise ValueError("n must be positive")
    a = [n]
    while True:
        yield Partition._trusted(a)
        rem = 0
        while a and a[-1] == 1:
            a.pop()
            rem += 1
        if not a:
            return
        a[-1] -= 1
        rem += 1
        k = a[-1]
        while rem > k:
            a.append(k)
            rem -= k
        a.append(rem)


def partition_count(n: int) -> int:
    """Number of partitions of n (Euler's pentagonal recurrence)."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


@dataclass(frozen=True)
class StandardTableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(v) for v in r) for r in self.rows))

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def word(self) -> tuple[int, ...]:
        """Row index (0-based) of each entry 1..n."""
        out = [0] * self.n
        for r, row in enumerate(self.rows):
            for v in row:
                out[v - 1] = r
        return tuple(out)

    @classmethod
    def from_word(cls, word: Sequence[int]) -> "StandardTableau":
        rows: list[list[int]] = []
        for v, r in enumerate(word, start=1):
            while len(rows) <= r:
                rows.append([])
            rows[r].append(v)
        return cls(tuple(tuple(r) for r in rows))

    def __str__(self) -> str:
        return "\n".join(" ".join(map(str, r)) for r in self.rows)


def is_standard(tableau) -> bool:
    """Rows and columns strictly increasing and entries exactly 1..n."""
    rows = tableau.rows if isinstance(tableau, StandardTableau) else tableau
    rows = [list(r) for r in rows]
    if any(not r for r in rows):
        return False
    lengths = [len(r) for r in rows]
    if any(lengths[i] < lengths[i + 1] for i in range(len(lengths) - 1)):
        return False
    entries = sorted(v for r in rows for v in r)
    if entries != list(range(1, len(entries) + 1)):
        return False
    for r in rows:
        if any(r[j] >= r[j + 1] for j in range(len(r) - 1)):
            return False
    for i in range(len(rows) - 1):
        upper, lower = rows[i], rows[i + 1]
        if any(upper[j] >= lower[j] for j in range(len(lower))):
            return False
    return True


def syt_words(shape) -> Iterator[tuple[int, ...]]:
    """All standard tableaux of the shape as row words, depth first."""
    lam = as_partition(shape)
    n = lam.n
    filled = [0] * len(lam)
    word = [0] * n

    def place(v):
        if v == n:
            yield tuple(word)
            return
        for i in range(len(lam)):
            if filled[i] < lam[i] and (i == 0 or filled[i - 1] > filled[i]):
                filled[i] += 1
                word[v] = i
                yield from place(v + 1)
                filled[i] -= 1

    yield from place(0)


def standard_tableaux(shape) -> Iterator[StandardTableau]:
    for w in syt_words(shape):
        yield StandardTableau.from_word(w)
