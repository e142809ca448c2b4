"""Row insertion on rank permutations and on real-valued samples.

The insertion rule: a new value sits down in the first row at its sorted
position and displaces the first entry strictly greater than it; the
displaced entry is inserted into the next row the same way.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._backend import kernels
from .young import Partition, StandardTableau, is_standard


def check_permutation(perm: Sequence[int]) -> np.ndarray:
    """Validate a 1-indexed permutation and return it as an int64 array."""
    arr = np.asarray(perm)
    if arr.ndim != 1:
        raise ValueError("a permutation is a flat sequence of images")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.round(arr)):
            raise ValueError("permutation entries must be integers")
    arr = arr.astype(np.int64)
    n = arr.size
    if n and not np.array_equal(np.sort(arr), np.arange(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}")
    return arr


def inverse_permutation(perm: Sequence[int]) -> np.ndarray:
    arr = check_permutation(perm)
    inv = np.empty_like(arr)
    inv[arr - 1] = np.arange(1, arr.size + 1)
    return inv


class RealTableau:
    """Rows of real sample values kept by the insertion algorithm.

    ``rows[k]`` is level k+1, strictly increasing; entries in the same column
    increase from one level to the next.
    """

    __slots__ = ("rows",)

    def __init__(self, rows=None):
        self.rows: list[list[float]] = [list(map(float, r)) for r in (rows or [])]

    @property
    def shape(self) -> Partition:
        return Partition(len(r) for r in self.rows)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def copy(self) -> "RealTableau":
        return RealTableau(self.rows)

    def check(self) -> None:
        """Raise AssertionError if a row or column invariant is broken."""
        for r in self.rows:
            assert all(r[t] < r[t + 1] for t in range(len(r) - 1)), "row not increasing"
        for upper, lower in zip(self.rows, self.rows[1:]):
            assert len(lower) <= len(upper), "rows not weakly shrinking"
            assert all(upper[t] < lower[t] for t in range(len(lower))), "column not increasing"

    def __eq__(self, other):
        return isinstance(other, RealTableau) and self.rows == other.rows

    def __repr__(self):
        return f"RealTableau({self.rows!r})"


def insert_value(state: RealTableau, x: float) -> RealTableau:
    """Insert one value into ``state`` in place and return it."""
    x = float(x)
    if math.isnan(x):
        raise ValueError("cannot insert NaN")
    for row in state.rows:
        k = bisect_right(row, x)
        if k == len(row):
            row.append(x)
            return state
        row[k], x = x, row[k]
    state.rows.append([x])
    return state


@dataclass(frozen=True)
class RSKPair:
    p: StandardTableau
    q: StandardTableau

    @property
    def shape(self) -> Partition:
        return self.p.shape


def rsk(perm: Sequence[int]) -> RSKPair:
    """Insertion tableau P and recording tableau Q of a permutation."""
    arr = check_permutation(perm)
    p_rows, q_rows = kernels.rsk_pq(arr)
    return RSKPair(StandardTableau(p_rows), StandardTableau(q_rows))


def level_process(perm: Sequence[int]) -> tuple[int, ...]:
    """Level (1-based row of P) of each value 1..n."""
    return tuple(r + 1 for r in rsk(perm).p.word())


def inverse_rsk(pair: RSKPair) -> tuple[int, ...]:
    """The permutation whose RSK pair is ``pair`` (reverse bumping)."""
    p, q = pair.p, pair.q
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: P has {p.shape}, Q has {q.shape}")
    if not (is_standard(p) and is_standard(q)):
        raise ValueError("both tableaux must be standard")
    return tuple(int(v) for v in kernels.inverse_rsk_words(p.word(), q.word()))


def _as_values(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("expected a flat sequence of values")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    return arr


def rsk_shape(values) -> Partition:
    """Shape of the insertion tableau, without building Q.

    Ties are allowed: a value equal to an existing entry lands after it.
    """
    return Partition._trusted(kernels.shape_of(_as_values(values)).tolist())


def y_process(sample) -> RealTableau:
    """Real-valued insertion tableau after inserting the sample in order."""
    tab = RealTableau.__new__(RealTableau)
    tab.rows = [r.tolist() for r in kernels.insertion_rows(_as_values(sample))]
    return tab


def z_rescale(y: RealTableau, n: int) -> RealTableau:
    """Every entry multiplied by n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return RealTableau([[n * v for v in row] for row in y.rows])
