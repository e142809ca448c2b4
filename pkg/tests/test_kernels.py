"""The compiled and pure-Python kernels must agree exactly on every input."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelstat import _fallback
from levelstat._backend import BACKEND, kernels
from levelstat.young import partitions_of, syt_words

compiled = pytest.mark.skipif(kernels is _fallback, reason="compiled extension not built")

perms = st.integers(1, 30).flatmap(lambda n: st.permutations(range(1, n + 1)))


def test_backend_name():
    assert BACKEND in ("cython", "python")


@compiled
@given(perms)
def test_rsk_parity(p):
    a = kernels.rsk_pq(np.array(p))
    b = _fallback.rsk_pq(np.array(p))
    assert [list(r) for r in a[0]] == b[0] and [list(r) for r in a[1]] == b[1]
    assert list(kernels.shape_of(np.array(p, float))) == list(_fallback.shape_of(np.array(p, float)))


@compiled
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=40))
def test_insertion_rows_parity(xs):
    a = kernels.insertion_rows(np.array(xs))
    b = _fallback.insertion_rows(np.array(xs))
    assert len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))


@compiled
def test_hook_and_move_parity():
    for n in range(1, 16):
        for lam in partitions_of(n):
            assert kernels.hook_log_sum(lam) == _fallback.hook_log_sum(lam)
            a, b = kernels.best_corner_move(lam), _fallback.best_corner_move(lam)
            assert a[1:] == b[1:]
            if a[1] >= 0:
                assert a[0] == pytest.approx(b[0], abs=1e-12)


@compiled
def test_scan_parity():
    for n in (1, 2, 7, 15):
        a = kernels.plancherel_scan(n, 0.0, 40.0, 64)
        b = _fallback.plancherel_scan(n, 0.0, 40.0, 64)
        assert a[0] == b[0]
        assert a[1:4] == pytest.approx(b[1:4], rel=1e-13)
        np.testing.assert_allclose(a[4], b[4], rtol=1e-12, atol=1e-300)
        ca = kernels.plancherel_collect(n, 1.0, 3.0)
        cb = _fallback.plancherel_collect(n, 1.0, 3.0)
        assert ca[1] == cb[1] and sorted(ca[2]) == sorted(cb[2])
        assert ca[0] == pytest.approx(cb[0], rel=1e-13, abs=1e-300)


@compiled
def test_chain_parity():
    rng = np.random.default_rng(5)
    n, k = 6, 600
    i = rng.integers(0, n, k)
    j = rng.integers(0, n, k)
    lu = np.log(rng.random(k))
    a = rng.normal(size=(n, n))
    start = rng.permutation(n).astype(np.int64)
    s1, s2 = start.copy(), start.copy()
    o1, c1 = kernels.checkerboard_chain(s1, a, i, j, lu, 7)
    o2, c2 = _fallback.checkerboard_chain(s2, a, i, j, lu, 7)
    assert c1 == c2 and np.array_equal(o1, o2) and np.array_equal(s1, s2)
    s1, s2 = start.copy(), start.copy()
    o1, c1 = kernels.exp_family_chain(s1, -0.7, i, j, lu, 5)
    o2, c2 = _fallback.exp_family_chain(s2, -0.7, i, j, lu, 5)
    assert c1 == c2 and np.array_equal(o1, o2) and np.array_equal(s1, s2)


@compiled
def test_prefix_count_parity():
    words = np.array(list(syt_words((3, 2, 1))))
    assert np.array_equal(kernels.syt_pair_prefix_counts(words), _fallback.syt_pair_prefix_counts(words))


def test_backend_fixture_runs_worked_example(backend):
    p, _ = backend.rsk_pq(np.array([5, 2, 11, 9, 8, 1, 3, 10, 4, 7, 6]))
    assert [list(r) for r in p] == [[1, 3, 4, 6], [2, 7, 10], [5, 8], [9], [11]]
    assert backend.inverse_rsk_words([0, 1, 0], [0, 0, 1]).tolist() == [2, 3, 1]
