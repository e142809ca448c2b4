"""Plancherel probabilities and the LP / H statistics.

For a shape of size n, p = (f^shape)^2 / n!, H = sum of ln hooks and
LP = -ln p = 2H - ln n!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._backend import kernels
from .rsk import rsk_shape
from .young import (
    Partition,
    as_partition,
    hook_log_sum,
    log_factorial,
    partitions_of,
    syt_count,
)

#: exact enumeration limit (p(130) is about 5.4e9 shapes)
ENUMERATION_CAP = 130
#: above this n an acceptance set is only available as an AcceptanceRegion
MATERIALIZE_CAP = 50
#: ln f histogram limit (exact integer counts)
HISTOGRAM_CAP = 40

_SCAN_BINS = 1 << 20


@dataclass(frozen=True)
class PlancherelRecord:
    shape: Partition
    log_f: float
    prob: float
    h: float
    lp: float


def plancherel_record(shape) -> PlancherelRecord:
    lam = as_partition(shape)
    h = hook_log_sum(lam)
    lnf = log_factorial(lam.n)
    lp = 2.0 * h - lnf
    return PlancherelRecord(lam, lnf - h, math.exp(-lp), h, lp)


@dataclass(frozen=True)
class MomentReport:
    n: int
    ave: float  # E[LP] / sqrt(n)
    sd: float  # SD[LP]
    total_prob: float
    mean_lp: float
    count: int


@lru_cache(maxsize=8)
def _scan(n: int):
    lp_hi = log_factorial(n) + 1.0
    count, s0, s1, s2, hist = kernels.plancherel_scan(n, 0.0, lp_hi, _SCAN_BINS)
    return count, s0, s1, s2, hist, lp_hi


def exact_moments(n: int, cap: int = ENUMERATION_CAP) -> MomentReport:
    """Mean and SD of LP under Plancherel(n) by full enumeration."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the enumeration cap {cap}; calibrate by Monte Carlo")
    count, s0, s1, s2, _, _ = _scan(n)
    mean = s1 / s0
    var = max(s2 / s0 - mean * mean, 0.0)
    return MomentReport(n, mean / math.sqrt(n), math.sqrt(var), s0, mean, count)


def _revlex_key(rec: PlancherelRecord):
    # ascending H is descending probability; ties go to the earlier shape in
    # reverse-lexicographic order
    return (rec.h, tuple(-p for p in rec.shape))


@dataclass(frozen=True)
class AcceptanceRegion:
    """Most probable shapes of size n holding at least 1 - alpha of the mass.

    Membership is decided by H alone except for shapes tied with the last
    accepted one, which are listed explicitly.
    """

    n: int
    alpha: float
    h_cut: float
    ties: frozenset
    mass: float
    size: int

    def __contains__(self, shape) -> bool:
        lam = as_partition(shape)
        if lam.n != self.n:
            return False
        h = hook_log_sum(lam)
        return h < self.h_cut or (h == self.h_cut and tuple(lam) in self.ties)

    @property
    def ident(self) -> str:
        return f"plancherel-n{self.n}-alpha{self.alpha:g}"


def _greedy(records, start_mass, start_count, target, n, alpha):
    ordered = sorted(records, key=_revlex_key)
    cum = start_mass
    for k, rec in enumerate(ordered):
        cum += rec.prob
        if cum >= target:
            h_cut = rec.h
            ties = frozenset(tuple(r.shape) for r in ordered[: k + 1] if r.h == h_cut)
            return AcceptanceRegion(n, alpha, h_cut, ties, cum, start_count + k + 1), ordered[: k + 1]
    raise RuntimeError("acceptance mass never reached the target; enumeration incomplete")


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")


# cumulative sums are compared with this slack so that a set whose exact mass
# is 1 - alpha is not lost to rounding
_MASS_SLACK = 1e-12


@lru_cache(maxsize=32)
def acceptance_region(n: int, alpha: float = 0.05, cap: int = ENUMERATION_CAP) -> AcceptanceRegion:
    """Greedy-by-probability acceptance region (see :func:`acceptance_set`)."""
    _check_alpha(alpha)
    if n > cap:
        raise ValueError(f"n = {n} exceeds the enumeration cap {cap}")
    target = 1.0 - alpha - _MASS_SLACK
    if n <= MATERIALIZE_CAP:
        records = [plancherel_record(lam) for lam in partitions_of(n)]
        return _greedy(records, 0.0, 0, target, n, alpha)[0]

    *_, hist, lp_hi = _scan(n)
    width = lp_hi / len(hist)
    cum = np.cumsum(hist)
    b = int(np.searchsorted(cum, target))
    pad = 1e-7
    lo = max(b * width - pad, 0.0)
    hi = (b + 1) * width + pad
    below, count_below, shapes, _ = kernels.plancherel_collect(n, lo, hi)
    records = [plancherel_record(Partition._trusted(s)) for s in shapes]
    return _greedy(records, below, count_below, target, n, alpha)[0]


def acceptance_set(n: int, alpha: float = 0.05) -> list[PlancherelRecord]:
    """Shapes sorted by decreasing probability, accumulated until the mass reaches 1 - alpha."""
    _check_alpha(alpha)
    if n > MATERIALIZE_CAP:
        raise ValueError(
            f"n = {n}: too many shapes to list; use acceptance_region for membership"
        )
    records = [plancherel_record(lam) for lam in partitions_of(n)]
    return _greedy(records, 0.0, 0, 1.0 - alpha - _MASS_SLACK, n, alpha)[1]


def log_dim_histogram(n: int, cap: int = HISTOGRAM_CAP) -> dict[int, int]:
    """Permutation counts grouped by the integer nearest ln f.

    Bin C collects (f^shape)^2 over shapes with ln f in (C - 1/2, C + 1/2];
    (f^shape)^2 is the number of permutations sharing the shape, and f itself
    counts those sharing a level process.
    """
    if n > cap:
        raise ValueError(f"n = {n} exceeds the exact histogram cap {cap}")
    bins: dict[int, int] = {}
    lnfact = log_factorial(n)
    for lam in partitions_of(n):
        f = syt_count(lam)
        c = math.ceil(lnfact - hook_log_sum(lam) - 0.5)
        bins[c] = bins.get(c, 0) + f * f
    return dict(sorted(bins.items()))


def typical_bins(hist: dict[int, int]) -> list[int]:
    """Bins C whose permutation count exceeds exp(2C)."""
    return [c for c, count in hist.items() if count > math.exp(2 * c)]


def sample_shape(n: int, rng: np.random.Generator) -> Partition:
    """Plancherel-distributed shape: RSK shape of a uniform permutation."""
    if n < 1:
        raise ValueError("n must be positive")
    return rsk_shape(rng.permutation(n).astype(np.float64))


def _vk_row_length(y: float, s: float) -> float:
    # boundary of the limit shape in rotated coordinates u = x - y, v = x + y
    # (scaled by s = sqrt n): v = s * omega(u / s)
    def omega(u):
        if abs(u) >= 2:
            return abs(u)
        return 2.0 / math.pi * (u * math.asin(u / 2) + math.sqrt(4 - u * u))

    def g(x):
        return x + y - s * omega((x - y) / s)

    lo, hi = 0.0, 2.0 * s + y + 1.0
    if g(lo) >= 0:
        return 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo


def limit_shape_guess(n: int) -> Partition:
    """Discretized limit shape with exactly n cells (search starting point)."""
    s = math.sqrt(n)
    rows = []
    i = 0
    while True:
        x = _vk_row_length(i + 0.5, s)
        k = int(round(x))
        if k <= 0:
            break
        if rows and k > rows[-1]:
            k = rows[-1]
        rows.append(k)
        i += 1
    total = sum(rows)
    while total < n:
        for i in range(len(rows) + 1):
            if total == n:
                break
            if i == len(rows):
                rows.append(1)
                total += 1
            elif i == 0 or rows[i - 1] > rows[i]:
                rows[i] += 1
                total += 1
    while total > n:
        for i in range(len(rows) - 1, -1, -1):
            if total == n:
                break
            if i == len(rows) - 1 or rows[i] > rows[i + 1]:
                rows[i] -= 1
                total -= 1
        while rows and rows[-1] == 0:
            rows.pop()
    return Partition(rows)


def descend_h(shape, max_steps: int | None = None, tol: float = 1e-9) -> tuple[Partition, float, int]:
    """Steepest descent on H over single-cell corner moves.

    A move removes one removable corner and adds one addable cell.  Returns
    the local minimum, its H and the number of moves made.
    """
    parts = list(as_partition(shape))
    steps = 0
    while max_steps is None or steps < max_steps:
        delta, a, b = kernels.best_corner_move(parts)
        if a < 0 or not delta < -tol:
            break
        parts[a] -= 1
        if b == len(parts):
            parts.append(1)
        else:
            parts[b] += 1
        if parts[-1] == 0:
            parts.pop()
        steps += 1
    lam = Partition(parts)
    return lam, hook_log_sum(lam), steps


def min_h_search(
    n: int,
    restarts: int = 8,
    rng: np.random.Generator | None = None,
    max_steps: int | None = None,
) -> tuple[Partition, float]:
    """Shape with locally minimal H (maximal f) among partitions of n.

    The first start is the discretized limit shape; the others are
    Plancherel samples.  The best local minimum is returned.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if rng is None:
        rng = np.random.default_rng(0)
    starts = [limit_shape_guess(n)]
    for _ in range(max(restarts, 1) - 1):
        starts.append(sample_shape(n, rng))
    best = None
    for start in starts:
        lam, h, _ = descend_h(start, max_steps=max_steps)
        if best is None or (h, tuple(-p for p in lam)) < (best[1], tuple(-p for p in best[0])):
            best = (lam, h)
    return best
