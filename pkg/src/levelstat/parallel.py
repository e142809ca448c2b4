"""Deterministic per-replica random streams and an order-preserving worker map.

Replica ``i`` of stream ``s`` under master seed ``seed`` always draws from

    numpy.random.default_rng(SeedSequence(seed, spawn_key=(s, i)))

so its output depends only on (seed, stream, i), never on how replicas are
spread over worker processes.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")


def replica_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, index)))


def _run_range(fn, seed, stream, start, stop):
    return [fn(replica_rng(seed, i, stream)) for i in range(start, stop)]


def map_replicas(
    fn: Callable[[np.random.Generator], T],
    replicas: int,
    seed: int,
    stream: int = 0,
    workers: int = 1,
) -> list[T]:
    """``[fn(rng_0), fn(rng_1), ...]`` in replica order.

    With ``workers > 1`` contiguous index ranges run in separate processes;
    ``fn`` must then be picklable (a module-level function or a
    ``functools.partial`` of one).
    """
    if replicas <= 0:
        return []
    if workers <= 1 or replicas == 1:
        return _run_range(fn, seed, stream, 0, replicas)
    chunks = min(replicas, 4 * workers)
    bounds = [replicas * k // chunks for k in range(chunks + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_range, fn, seed, stream, bounds[k], bounds[k + 1])
            for k in range(chunks)
        ]
        out: list[T] = []
        for fut in futures:
            out.extend(fut.result())
    return out
