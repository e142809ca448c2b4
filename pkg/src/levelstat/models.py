"""Samplers for the null model and the alternatives.

Sequence models (iid, AR(1)) return real samples; permutation models
(Gaussian pair, checkerboard, exponential family) return 1-based
permutations as int64 arrays.  The two MCMC models use Metropolis chains
with random transposition proposals (positions i, j drawn independently, so
the proposal is the identity with probability 1/n); one sweep is n
proposals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from ._backend import kernels
from .rsk import rsk_shape
from .young import Partition

SEQUENCE_KINDS = ("iid_uniform", "iid_exponential", "ar1")
PERMUTATION_KINDS = ("gauss_pair", "checkerboard", "exp_family")
KINDS = SEQUENCE_KINDS + PERMUTATION_KINDS

# proposals are generated in blocks of about this many
_BLOCK = 1 << 18


class TiedSampleError(ValueError):
    """Ranks are undefined because a sample contains repeated values."""


@dataclass(frozen=True)
class MCMCConfig:
    """Chain schedule in sweeps (n proposals each); ``None`` means the default.

    Defaults: burn-in 50 n sweeps, thinning n sweeps.
    """

    burn_in: int | None = None
    thinning: int | None = None
    seed: int | None = None

    def __post_init__(self):
        for name in ("burn_in", "thinning"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be >= 1 sweep")

    def burn_in_for(self, n: int) -> int:
        return self.burn_in if self.burn_in is not None else 50 * n

    def thinning_for(self, n: int) -> int:
        return self.thinning if self.thinning is not None else n


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    n: int
    rho: float = 0.0
    t: float = 0.0
    a: np.ndarray | None = field(default=None, compare=False)
    mcmc: MCMCConfig = MCMCConfig()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == "ar1" and not abs(self.rho) < 1:
            raise ValueError("ar1 needs |rho| < 1")
        if self.kind == "gauss_pair" and not abs(self.rho) <= 1:
            raise ValueError("gauss_pair needs |rho| <= 1")
        if self.kind == "exp_family" and not np.isfinite(self.t):
            raise ValueError("t must be finite")
        if self.kind == "checkerboard":
            a = _check_matrix(self.a, self.n)
            object.__setattr__(self, "a", a)

    @property
    def is_sequence(self) -> bool:
        return self.kind in SEQUENCE_KINDS

    @property
    def param(self) -> str:
        """Short parameter label used in reports."""
        if self.kind in ("ar1", "gauss_pair"):
            return f"rho={self.rho:g}"
        if self.kind == "exp_family":
            return f"t={self.t:g}"
        if self.kind == "checkerboard":
            return f"a={self.n}x{self.n}"
        return ""


def _check_matrix(a, n):
    if a is None:
        raise ValueError("checkerboard needs an n x n matrix")
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (n, n):
        raise ValueError(f"matrix must be {n} x {n}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def sample_iid(n: int, marginal: str, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    if marginal in ("uniform01", "uniform", "iid_uniform"):
        return rng.random(n)
    if marginal in ("exponential1", "exponential", "iid_exponential"):
        return rng.exponential(1.0, n)
    raise ValueError(f"unknown marginal {marginal!r}")


def sample_ar1(n: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Stationary Gaussian AR(1) path with unit variance and lag-1 correlation rho."""
    if not abs(rho) < 1:
        raise ValueError("|rho| must be < 1")
    if n < 1:
        raise ValueError("n must be positive")
    e = rng.standard_normal(n)
    e[1:] *= np.sqrt(1.0 - rho * rho)
    return lfilter([1.0], [1.0, -rho], e)


def _ranks(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="stable")
    if x.size > 1 and np.any(x[order][1:] == x[order][:-1]):
        raise TiedSampleError("sample contains ties; ranks are not unique")
    r = np.empty(x.size, dtype=np.int64)
    r[order] = np.arange(1, x.size + 1)
    return r


def permutation_from_two_samples(x, u) -> np.ndarray:
    """pi with pi(rank of x_i) = rank of u_i, as a 1-based array."""
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if x.shape != u.shape or x.ndim != 1:
        raise ValueError("x and u must be flat sequences of equal length")
    rx, ru = _ranks(x), _ranks(u)
    perm = np.empty_like(rx)
    perm[rx - 1] = ru
    return perm


def sample_gauss_pair(n: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    if not abs(rho) <= 1:
        raise ValueError("|rho| must be <= 1")
    x = rng.standard_normal(n)
    z = rng.standard_normal(n)
    u = rho * x + np.sqrt(max(1.0 - rho * rho, 0.0)) * z
    return permutation_from_two_samples(x, u)


def _proposals(n, count, rng):
    # i and j independent, so i == j (stay put) has probability 1/n; without
    # that hold a chain accepting every swap alternates parity and never mixes
    i = rng.integers(0, n, count)
    j = rng.integers(0, n, count)
    log_u = np.log(rng.random(count))
    return i, j, log_u


def _run_chain(step, n, draws, cfg, rng):
    """Drive a kernel chain: burn in, then record every thinning sweep."""
    out = np.empty((draws, n), dtype=np.int64)
    if n == 1:
        out[:] = 1
        return out, 0.0
    state = rng.permutation(n).astype(np.int64)
    burn = cfg.burn_in_for(n) * n
    stride = cfg.thinning_for(n) * n
    accepted = 0
    proposed = 0
    left = burn
    while left > 0:
        c = min(left, _BLOCK)
        _, acc = step(state, *_proposals(n, c, rng), c)
        left -= c
    per_block = max(1, _BLOCK // stride)
    row = 0
    while row < draws:
        m = min(per_block, draws - row)
        rec, acc = step(state, *_proposals(n, m * stride, rng), stride)
        out[row : row + m] = rec
        accepted += acc
        proposed += m * stride
        row += m
    out += 1
    return out, accepted / proposed if proposed else 0.0


def checkerboard_chain(a, draws: int, cfg: MCMCConfig, rng: np.random.Generator):
    """``draws`` thinned states of the chain for log P(pi) = sum_i a[i, pi(i)].

    Returns (draws x n array of 1-based permutations, acceptance rate).
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    a = _check_matrix(a, n)

    def step(state, i, j, lu, stride):
        return kernels.checkerboard_chain(state, a, i, j, lu, stride)

    return _run_chain(step, n, draws, cfg, rng)


def exp_family_chain(n: int, t: float, draws: int, cfg: MCMCConfig, rng: np.random.Generator):
    """``draws`` thinned states of the chain for P_t(pi) proportional to exp(t LP(pi))."""
    if not np.isfinite(t):
        raise ValueError("t must be finite")

    def step(state, i, j, lu, stride):
        return kernels.exp_family_chain(state, float(t), i, j, lu, stride)

    return _run_chain(step, n, draws, cfg, rng)


def sample_checkerboard(a, cfg: MCMCConfig, rng: np.random.Generator) -> np.ndarray:
    return checkerboard_chain(a, 1, cfg, rng)[0][0]


def sample_exp_family(n: int, t: float, cfg: MCMCConfig, rng: np.random.Generator) -> np.ndarray:
    return exp_family_chain(n, t, 1, cfg, rng)[0][0]


def draw(spec: ModelSpec, rng: np.random.Generator) -> np.ndarray:
    """One data set: a real sequence or a 1-based permutation, per the model."""
    k = spec.kind
    if k in ("iid_uniform", "iid_exponential"):
        return sample_iid(spec.n, k, rng)
    if k == "ar1":
        return sample_ar1(spec.n, spec.rho, rng)
    if k == "gauss_pair":
        return sample_gauss_pair(spec.n, spec.rho, rng)
    if k == "checkerboard":
        return sample_checkerboard(spec.a, spec.mcmc, rng)
    return sample_exp_family(spec.n, spec.t, spec.mcmc, rng)


def draw_shape(spec: ModelSpec, rng: np.random.Generator) -> Partition:
    """RSK shape of one draw (ranks are all that matter)."""
    return rsk_shape(draw(spec, rng))
