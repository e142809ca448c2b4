from functools import partial

import numpy as np

from levelstat.parallel import map_replicas, replica_rng


def _draw(k, rng):
    return rng.random(k).tolist()


def test_streams_are_keyed():
    a = replica_rng(7, 3).random(4)
    assert np.array_equal(a, replica_rng(7, 3).random(4))
    assert not np.array_equal(a, replica_rng(7, 4).random(4))
    assert not np.array_equal(a, replica_rng(7, 3, stream=1).random(4))


def test_map_independent_of_workers():
    fn = partial(_draw, 3)
    one = map_replicas(fn, 23, seed=5, workers=1)
    three = map_replicas(fn, 23, seed=5, workers=3)
    assert one == three
    assert map_replicas(fn, 0, seed=5) == []
