from itertools import permutations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from levelstat.rsk import (
    RealTableau,
    RSKPair,
    check_permutation,
    insert_value,
    inverse_permutation,
    inverse_rsk,
    level_process,
    rsk,
    rsk_shape,
    y_process,
    z_rescale,
)
from levelstat.young import StandardTableau

from conftest import EXAMPLE, EXAMPLE_SAMPLE

perms = st.integers(1, 40).flatmap(lambda n: st.permutations(range(1, n + 1)))
samples = st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=60, unique=True)


def test_example_insertion_tableau():
    pair = rsk(EXAMPLE)
    assert pair.p.rows == ((1, 3, 4, 6), (2, 7, 10), (5, 8), (9,), (11,))
    assert pair.shape == (4, 3, 2, 1, 1)


def test_example_levels():
    assert level_process(EXAMPLE) == (1, 2, 1, 1, 3, 1, 2, 3, 4, 2, 5)


def test_example_sample_matches_ranks():
    assert rsk_shape(EXAMPLE_SAMPLE) == rsk(EXAMPLE).shape
    y = y_process(EXAMPLE_SAMPLE)
    y.check()
    assert y.rows[0] == [0.032, 0.251, 0.343, 0.574]


def test_check_permutation_rejects():
    with pytest.raises(ValueError):
        check_permutation([1, 1, 2])
    with pytest.raises(ValueError):
        check_permutation([0, 1, 2])
    with pytest.raises(ValueError):
        check_permutation([1.5, 2])
    assert check_permutation([]).size == 0


def test_inverse_rsk_exhaustive_small():
    for n in range(1, 8):
        seen = set()
        for p in permutations(range(1, n + 1)):
            pair = rsk(p)
            assert inverse_rsk(pair) == p
            seen.add((pair.p, pair.q))
        assert len(seen) == len(set(permutations(range(n))))


def test_inverse_rsk_validation():
    p = StandardTableau(((1, 2), (3,)))
    q = StandardTableau(((1, 2, 3),))
    with pytest.raises(ValueError, match="shape"):
        inverse_rsk(RSKPair(p, q))
    bad = StandardTableau(((2, 1), (3,)))
    with pytest.raises(ValueError, match="standard"):
        inverse_rsk(RSKPair(bad, p))


def test_insert_value_rejects_nan():
    with pytest.raises(ValueError):
        insert_value(RealTableau(), float("nan"))
    with pytest.raises(ValueError):
        rsk_shape([1.0, float("inf")])


def test_ties_are_inserted_after_equal_entries():
    # a repeated value does not bump its equal
    assert rsk_shape([1.0, 1.0, 1.0]) == (3,)


def test_z_rescale():
    y = y_process([0.5, 0.25])
    assert z_rescale(y, 2).rows == [[0.5], [1.0]]
    with pytest.raises(ValueError):
        z_rescale(y, 0)


@given(perms)
def test_rsk_round_trip(p):
    pair = rsk(p)
    assert inverse_rsk(pair) == tuple(p)
    assert pair.p.shape == pair.q.shape


@given(perms)
def test_inverse_permutation_swaps_tableaux(p):
    a, b = rsk(p), rsk(inverse_permutation(p))
    assert a.p == b.q and a.q == b.p


@given(perms)
def test_first_row_is_longest_increasing_subsequence(p):
    # patience sorting: number of piles
    piles = []
    import bisect

    for x in p:
        k = bisect.bisect_left(piles, x)
        if k == len(piles):
            piles.append(x)
        else:
            piles[k] = x
    assert rsk_shape(p)[0] == len(piles)


@given(samples)
def test_real_tableau_invariants(xs):
    y = y_process(xs)
    y.check()
    assert y.n == len(xs)
    ref = RealTableau()
    for x in xs:
        insert_value(ref, x)
    assert ref == y


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=50, unique=True))
def test_shape_invariant_under_monotone_maps(xs):
    xs = np.array(xs, dtype=float)
    assert rsk_shape(xs) == rsk_shape(np.exp(xs / 1e6)) == rsk_shape(3 * xs - 7)
