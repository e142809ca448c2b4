"""Prefix factorization of permutation distributions.

A distribution d on S_n induces, for every prefix set G (the set of the
first k values of pi) and every j outside G, the conditional probability
q(j | G) that the next value is j.  The proper distribution

    P*(pi) = prod_k q(pi_{k+1} | G_k)

matches every one of these conditionals, and for every d

    D(d || U) = D(d || P*) + D(P* || U).

Subsets are bitmasks: value v is bit v - 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .rsk import check_permutation
from .young import Partition, as_partition, log_factorial, syt_count, syt_words

EXPLICIT_CAP = 8
SHAPE_CAP = 11
DIMENSION_CAP = 4

_SUM_TOL = 1e-12
_MASS_TOL = 1e-10


def all_permutations(n: int) -> np.ndarray:
    """Every permutation of 1..n in lexicographic order, one per row."""
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64).reshape(-1, n)


def _prefix_masks(perms: np.ndarray) -> np.ndarray:
    """masks[:, k] is the bitmask of the first k values (k = 0..n-1)."""
    bits = np.left_shift(1, perms - 1)
    masks = np.zeros_like(perms)
    masks[:, 1:] = np.cumsum(bits, axis=1)[:, :-1]
    return masks


@dataclass(frozen=True)
class PermutationDistribution:
    """Either an explicit list of permutations with probabilities (n <= 8)
    or the uniform distribution on permutations of one RSK shape (n <= 11)."""

    n: int
    perms: np.ndarray | None = None
    probs: np.ndarray | None = None
    shape: Partition | None = None

    @classmethod
    def explicit(cls, perms, probs) -> "PermutationDistribution":
        perms = np.atleast_2d(np.asarray(perms, dtype=np.int64))
        probs = np.asarray(probs, dtype=np.float64)
        n = perms.shape[1]
        if n > EXPLICIT_CAP:
            raise ValueError(f"explicit distributions are limited to n <= {EXPLICIT_CAP}")
        if probs.shape != (perms.shape[0],):
            raise ValueError("one probability per permutation")
        if np.any(probs < 0) or not abs(probs.sum() - 1.0) <= _SUM_TOL:
            raise ValueError("probabilities must be non-negative and sum to 1")
        for p in perms:
            check_permutation(p)
        return cls(n, perms, probs)

    @classmethod
    def uniform(cls, n: int) -> "PermutationDistribution":
        perms = all_permutations(n)
        return cls.explicit(perms, np.full(len(perms), 1.0 / len(perms)))

    @classmethod
    def point_mass(cls, perm) -> "PermutationDistribution":
        p = check_permutation(perm)
        return cls.explicit(p[None, :], [1.0])

    @classmethod
    def uniform_on_shape(cls, shape) -> "PermutationDistribution":
        lam = as_partition(shape)
        if lam.n > SHAPE_CAP:
            raise ValueError(f"shape-uniform distributions are limited to n <= {SHAPE_CAP}")
        return cls(lam.n, shape=lam)

    @property
    def is_explicit(self) -> bool:
        return self.perms is not None

    def log_divergence_from_uniform(self) -> float:
        """D(d || U) = ln n! - entropy(d)."""
        if self.is_explicit:
            p = self.probs[self.probs > 0]
            return float(log_factorial(self.n) + np.sum(p * np.log(p)))
        f = syt_count(self.shape)
        return log_factorial(self.n) - 2.0 * math.log(f)

    def entropy(self) -> float:
        return log_factorial(self.n) - self.log_divergence_from_uniform()


@dataclass(frozen=True)
class PrefixConditionalTable:
    """mass[G, j] = P(G_k = G, next value = j + 1); q = mass / row sums."""

    n: int
    mass: np.ndarray

    @property
    def q(self) -> np.ndarray:
        rows = self.mass.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(rows > 0, self.mass / rows, 0.0)

    def reachable(self) -> np.ndarray:
        return np.flatnonzero(self.mass.sum(axis=1) > 0)

    def check(self) -> None:
        q = self.q
        for g in self.reachable():
            s = q[g].sum()
            if not abs(s - 1.0) <= _SUM_TOL:
                raise AssertionError(f"conditionals at G={g:#b} sum to {s}")
            if np.any(q[g][[(g >> j) & 1 == 1 for j in range(self.n)]] != 0):
                raise AssertionError(f"mass on a value already in G={g:#b}")


def prefix_conditionals(d: PermutationDistribution) -> PrefixConditionalTable:
    n = d.n
    if n > SHAPE_CAP:
        raise ValueError(f"n = {n} exceeds {SHAPE_CAP}")
    if d.is_explicit:
        mass = np.zeros((1 << n, n))
        masks = _prefix_masks(d.perms)
        for k in range(n):
            np.add.at(mass, (masks[:, k], d.perms[:, k] - 1), d.probs)
        return PrefixConditionalTable(n, mass)
    words = np.array(list(syt_words(d.shape)), dtype=np.int64)
    counts = kernels.syt_pair_prefix_counts(words)
    return PrefixConditionalTable(n, counts / float(len(words)) ** 2)


@dataclass(frozen=True)
class ProperDistribution:
    table: PrefixConditionalTable

    @property
    def n(self) -> int:
        return self.table.n

    def log_prob(self, perms) -> np.ndarray:
        perms = np.atleast_2d(np.asarray(perms, dtype=np.int64))
        q = self.table.q
        masks = _prefix_masks(perms)
        with np.errstate(divide="ignore"):
            return np.log(q[masks, perms - 1]).sum(axis=1)

    def prob(self, perms) -> np.ndarray:
        return np.exp(self.log_prob(perms))

    def forward_masses(self) -> np.ndarray:
        """P*(G_k = G) for every subset G, pushed up the lattice."""
        n = self.n
        q = self.table.q
        mass = np.zeros(1 << n)
        mass[0] = 1.0
        bits = 1 << np.arange(n)
        for g in range(1 << n):
            if mass[g] > 0:
                mass[g | bits] += mass[g] * q[g]
        return mass

    def kl_to_uniform(self) -> float:
        """D(P* || U) by dynamic programming over the subset lattice."""
        n = self.n
        q = self.table.q
        mass = self.forward_masses()
        sizes = np.array([bin(g).count("1") for g in range(1 << n)])
        for k in range(n + 1):
            level = mass[sizes == k].sum()
            if not abs(level - 1.0) <= _MASS_TOL:
                raise AssertionError(f"lattice level {k} carries mass {level}")
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(q > 0, q * np.log(q * (n - sizes)[:, None]), 0.0)
        return float(np.dot(mass, terms.sum(axis=1)))


def proper_projection(d: PermutationDistribution) -> ProperDistribution:
    return ProperDistribution(prefix_conditionals(d))


def kl_to_uniform(p: ProperDistribution) -> float:
    return p.kl_to_uniform()


@dataclass(frozen=True)
class DivergenceReport:
    n: int
    d_to_uniform: float  # D(d || U)
    d_to_proper: float  # D(d || P*)
    proper_to_uniform: float  # D(P* || U)


def divergences(d: PermutationDistribution) -> DivergenceReport:
    """The three divergences among d, its proper projection and uniform.

    D(d || P*) uses E_d[ln P*] = sum over (G, j) of mass * ln q, which needs
    only the table.
    """
    table = prefix_conditionals(d)
    proj = ProperDistribution(table)
    q = table.q
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = float(np.sum(np.where(table.mass > 0, table.mass * np.log(q), 0.0)))
    d_u = d.log_divergence_from_uniform()
    d_p = -d.entropy() - cross
    return DivergenceReport(d.n, d_u, max(d_p, 0.0) + 0.0, proj.kl_to_uniform())


def _edge_features(perms: np.ndarray) -> np.ndarray:
    """Indicator matrix: row pi, column (G_k, pi_{k+1}) for every step k."""
    m, n = perms.shape
    masks = _prefix_masks(perms)
    cols = masks * n + (perms - 1)
    feats = np.zeros((m, (1 << n) * n))
    np.put_along_axis(feats, cols, 1.0, axis=1)
    used = feats.any(axis=0)
    return feats[:, used]


def _inverse_rows(perms: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perms)
    rows = np.arange(perms.shape[0])[:, None]
    inv[rows, perms - 1] = np.arange(1, perms.shape[1] + 1)
    return inv


def _span_basis(a: np.ndarray, tol: float) -> np.ndarray:
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    return u[:, s > tol * max(s[0], 1.0)]


def double_proper_dimension(n: int, seed: int = 0, tol: float = 1e-8, step: float = 1e-5) -> int:
    """Dimension of the family that is proper for both pi and its inverse.

    The proper family is log-linear in the prefix-step indicators, so the
    doubly proper log-probabilities range over the intersection of two
    linear spans.  The dimension is the numeric rank of the finite-difference
    Jacobian of theta -> log P at a random interior point.
    """
    if not 1 <= n <= DIMENSION_CAP:
        raise ValueError(f"n must lie in 1..{DIMENSION_CAP}")
    perms = all_permutations(n)
    v1 = _span_basis(_edge_features(perms), tol)
    v2 = _span_basis(_edge_features(_inverse_rows(perms)), tol)
    # x = v1 a = v2 b  <=>  [v1, -v2] (a, b) = 0
    stacked = np.hstack([v1, -v2])
    _, s, vt = np.linalg.svd(stacked)
    null = vt[np.sum(s > tol * s[0]) :].T
    w = _span_basis(v1 @ null[: v1.shape[1]], tol)
    if w.shape[1] == 0:
        return 0

    def log_p(theta):
        x = w @ theta
        return x - (np.log(np.sum(np.exp(x - x.max()))) + x.max())

    theta0 = np.random.default_rng(seed).normal(size=w.shape[1])
    jac = np.empty((len(perms), w.shape[1]))
    for c in range(w.shape[1]):
        e = np.zeros_like(theta0)
        e[c] = step
        jac[:, c] = (log_p(theta0 + e) - log_p(theta0 - e)) / (2 * step)
    s = np.linalg.svd(jac, compute_uv=False)
    return int(np.sum(s > tol))
