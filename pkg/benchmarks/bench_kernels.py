"""Compiled versus pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Prints one line per kernel with the best wall time of each backend and the
speedup.  Both backends get identical inputs.
"""

import argparse
import time

import numpy as np

from levelstat import _fallback

try:
    from levelstat import _kernels
except ImportError:
    _kernels = None


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    x = rng.random(20_000)
    perm = (rng.permutation(2_000) + 1).astype(np.int64)
    shape = np.array(sorted(rng.integers(1, 200, 150), reverse=True), dtype=np.int64)
    n = 6
    a = rng.normal(size=(n, n))
    count = 200_000
    i, j = rng.integers(0, n, count), rng.integers(0, n, count)
    lu = np.log(rng.random(count))
    state = rng.permutation(n).astype(np.int64)
    return [
        ("shape_of n=20000", lambda k: k.shape_of(x)),
        ("rsk_pq n=2000", lambda k: k.rsk_pq(perm)),
        ("hook_log_sum |shape|~15000", lambda k: k.hook_log_sum(shape)),
        ("checkerboard_chain 2e5 steps", lambda k: k.checkerboard_chain(state.copy(), a, i, j, lu, count)),
        ("exp_family_chain 2e5 steps", lambda k: k.exp_family_chain(state.copy(), 0.5, i, j, lu, count)),
        ("plancherel_scan n=40", lambda k: k.plancherel_scan(40)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run pip install -e . --no-build-isolation")
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for name, call in cases(rng):
        tc = best_time(lambda: call(_kernels), args.repeat)
        tp = best_time(lambda: call(_fallback), args.repeat)
        print(f"{name:32s} {tc:10.4f} {tp:10.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
