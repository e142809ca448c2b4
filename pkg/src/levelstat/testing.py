"""IID tests built on the RSK shape, their calibration and power studies."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .models import ModelSpec, draw_shape
from .parallel import map_replicas
from .plancherel import (
    ENUMERATION_CAP,
    acceptance_region,
    exact_moments,
    plancherel_record,
    sample_shape,
)
from .rsk import check_permutation
from .young import Partition, as_partition, hook_log_sum, log_factorial

TEST_KINDS = ("shape_set", "h_test")

# stream ids for replica_rng; model k of a power study uses stream 1 + k
CALIBRATION_STREAM = 0


@dataclass(frozen=True)
class TestDecision:
    __test__ = False  # not a pytest class

    statistic: str
    observed: float
    accept: bool
    alpha: float
    reference: str
    z: float | None = None
    p_value: float | None = None
    degenerate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "accept", bool(self.accept))

    def record(self) -> str:
        """Single machine-readable line of key=value pairs."""
        parts = [
            f"statistic={self.statistic}",
            f"observed={self.observed:.17g}",
            f"reference={self.reference}",
            f"z={'' if self.z is None else format(self.z, '.17g')}",
            f"p_value={'' if self.p_value is None else format(self.p_value, '.17g')}",
            f"alpha={self.alpha:g}",
            f"degenerate={int(self.degenerate)}",
            f"decision={'accept' if self.accept else 'reject'}",
        ]
        return " ".join(parts)

    def summary(self) -> str:
        verdict = "ACCEPT" if self.accept else "REJECT"
        extra = f", z = {self.z:.4f}" if self.z is not None else ""
        if self.p_value is not None:
            extra += f", p = {self.p_value:.4g}"
        if self.degenerate:
            extra += " (degenerate reference)"
        return f"{verdict} iid at alpha = {self.alpha:g}: {self.statistic} = {self.observed:.6f}{extra}"


def shape_set_test(shape, n: int | None = None, alpha: float = 0.05) -> TestDecision:
    """Accept iff the shape lies in the greedy (1 - alpha) acceptance set."""
    lam = as_partition(shape)
    n = lam.n if n is None else n
    if lam.n != n:
        raise ValueError(f"shape has {lam.n} cells, expected {n}")
    if n > ENUMERATION_CAP:
        raise ValueError(f"n = {n} exceeds the enumeration cap {ENUMERATION_CAP}; use h_test")
    region = acceptance_region(n, alpha)
    return TestDecision("LP", plancherel_record(lam).lp, lam in region, alpha, region.ident)


@dataclass(frozen=True)
class HCalibration:
    n: int
    mean: float
    sd: float
    method: str  # "exact" or "mc"
    replicas: int = 0
    samples: np.ndarray | None = field(default=None, compare=False, repr=False)

    @property
    def ident(self) -> str:
        return f"H~N({self.mean:.17g},{self.sd:.17g})[{self.method}]"


def _shape_h(n, rng):
    return hook_log_sum(sample_shape(n, rng))


def simulate_h(n: int, replicas: int, seed: int, stream: int = CALIBRATION_STREAM, workers: int = 1) -> np.ndarray:
    """H of ``replicas`` Plancherel shapes drawn with per-replica streams."""
    return np.array(map_replicas(partial(_shape_h, n), replicas, seed, stream, workers))


def calibrate_h(
    n: int,
    replicas: int = 1000,
    seed: int = 0,
    workers: int = 1,
    exact_cap: int = ENUMERATION_CAP,
    keep_samples: bool = False,
) -> HCalibration:
    """Null mean and SD of H.

    Exact for n <= exact_cap through mean_H = (E[LP] + ln n!)/2 and
    sd_H = SD[LP]/2; Monte Carlo otherwise.  With ``keep_samples`` the
    simulated values are kept for empirical p-values (and simulation is used
    even below the cap).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n <= exact_cap and not keep_samples:
        m = exact_moments(n)
        return HCalibration(n, (m.mean_lp + log_factorial(n)) / 2.0, m.sd / 2.0, "exact")
    if replicas < 2:
        raise ValueError("Monte Carlo calibration needs at least 2 replicas")
    h = simulate_h(n, replicas, seed, workers=workers)
    return HCalibration(n, float(h.mean()), float(h.std(ddof=1)), "mc", replicas, h if keep_samples else None)


# |H - mean| below this counts as equal for a zero-SD reference
_DEGENERATE_TOL = 1e-9


def h_test(shape, calibration: HCalibration, alpha: float = 0.05, mode: str = "normal") -> TestDecision:
    """Two-sided test on H against the null calibration.

    ``mode="normal"``: accept iff |z| <= z_{1-alpha/2}.
    ``mode="mc"``: accept iff the two-sided empirical p-value exceeds alpha
    (needs a calibration built with ``keep_samples=True``).
    """
    lam = as_partition(shape)
    if lam.n != calibration.n:
        raise ValueError(f"shape has {lam.n} cells, calibration is for n = {calibration.n}")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    h = hook_log_sum(lam)
    if mode == "mc":
        s = calibration.samples
        if s is None:
            raise ValueError("mc mode needs calibration samples (calibrate_h(..., keep_samples=True))")
        r = len(s)
        lo = (np.count_nonzero(s <= h) + 1) / (r + 1)
        hi = (np.count_nonzero(s >= h) + 1) / (r + 1)
        p = min(1.0, 2.0 * min(lo, hi))
        return TestDecision("H", h, p > alpha, alpha, calibration.ident, p_value=p)
    if mode != "normal":
        raise ValueError(f"unknown mode {mode!r}")
    if calibration.sd == 0:
        same = abs(h - calibration.mean) <= _DEGENERATE_TOL * max(1.0, abs(calibration.mean))
        return TestDecision("H", h, same, alpha, calibration.ident, degenerate=True)
    z = (h - calibration.mean) / calibration.sd
    p = 2.0 * norm.sf(abs(z))
    return TestDecision("H", h, abs(z) <= norm.ppf(1 - alpha / 2), alpha, calibration.ident, z, p)


@dataclass(frozen=True)
class PowerRow:
    model: str
    param: str
    n: int
    replicas: int
    rejections: int

    @property
    def power(self) -> float:
        return self.rejections / self.replicas

    @property
    def se(self) -> float:
        p = self.power
        return math.sqrt(p * (1 - p) / self.replicas)


@dataclass(frozen=True)
class PowerTable:
    test: str
    alpha: float
    rows: tuple[PowerRow, ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["model", "param", "n", "replicas", "rejections", "power", "se"])
        for r in self.rows:
            w.writerow([r.model, r.param, r.n, r.replicas, r.rejections, f"{r.power:.17g}", f"{r.se:.17g}"])
        return buf.getvalue()


def _replica_rejects(spec, test, alpha, calibration, rng):
    lam = draw_shape(spec, rng)
    if test == "shape_set":
        return not shape_set_test(lam, spec.n, alpha).accept
    return not h_test(lam, calibration, alpha).accept


def power_study(
    grid: Sequence[ModelSpec],
    test: str = "h_test",
    alpha: float = 0.05,
    replicas: int = 1000,
    seed: int = 0,
    workers: int = 1,
    calibration_replicas: int = 1000,
    calibrations: dict[int, HCalibration] | None = None,
) -> PowerTable:
    """Rejection rate of ``test`` for every model in ``grid``.

    Model k draws its replicas from stream k + 1; Monte Carlo calibrations
    (n above the enumeration cap) use stream 0.
    """
    if test not in TEST_KINDS:
        raise ValueError(f"unknown test {test!r}; expected one of {', '.join(TEST_KINDS)}")
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    cals = dict(calibrations or {})
    rows = []
    for k, spec in enumerate(grid):
        cal = None
        if test == "h_test":
            if spec.n not in cals:
                cals[spec.n] = calibrate_h(spec.n, calibration_replicas, seed, workers)
            cal = cals[spec.n]
        fn = partial(_replica_rejects, spec, test, alpha, cal)
        rej = map_replicas(fn, replicas, seed, stream=k + 1, workers=workers)
        rows.append(PowerRow(spec.kind, spec.param, spec.n, replicas, int(sum(rej))))
    return PowerTable(test, alpha, tuple(rows))


def delta_permutation(perm) -> np.ndarray:
    """delta with delta(pi_i) = pi_{i+1}, indices taken cyclically (1-based)."""
    p = check_permutation(perm)
    d = np.empty_like(p)
    d[p - 1] = np.roll(p, -1)
    return d


def cycle_type(perm) -> Partition:
    p = check_permutation(perm) - 1
    seen = np.zeros(p.size, dtype=bool)
    lengths = []
    for s in range(p.size):
        if seen[s]:
            continue
        k = 0
        while not seen[s]:
            seen[s] = True
            s = p[s]
            k += 1
        lengths.append(k)
    return Partition(sorted(lengths, reverse=True))


def delta_dynamics(perm) -> Partition:
    """Cycle type of the neighbour dynamics delta of ``perm``."""
    return cycle_type(delta_permutation(perm))
