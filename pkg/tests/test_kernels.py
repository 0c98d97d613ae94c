import numpy as np
import pytest

from contextsearch import kernels


@pytest.fixture(params=["numpy", "numba"])
def backend(request):
    previous = kernels.get_backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


def arr(*xs):
    return np.array(xs, dtype=np.int64)


def test_membership_mask(backend):
    values = arr(1, 5, 7, 9, 100)
    sset = arr(5, 9, 11)
    assert kernels.membership_mask(values, sset).tolist() == [False, True, False, True, False]
    assert kernels.membership_mask(arr(), sset).tolist() == []
    assert kernels.membership_mask(values, arr()).tolist() == [False] * 5


def test_aggregate_scores(backend):
    keys = arr(4, 2, 4, 2, 9)
    weights = arr(1, 2, 3, 4, 5)
    ids, sums = kernels.aggregate_scores(keys, weights)
    assert ids.tolist() == [2, 4, 9]
    assert sums.tolist() == [6, 4, 5]
    ids, sums = kernels.aggregate_scores(arr(), arr())
    assert ids.tolist() == [] and sums.tolist() == []


def test_dedup_mask(backend):
    cids = arr(1, 1, 1, 2, 2)
    iids = arr(3, 3, 4, 4, 4)
    pos = arr(5, 5, 5, 6, 6)
    assert kernels.dedup_mask(cids, iids, pos).tolist() == [True, False, True, True, False]


def test_intersect_sorted(backend):
    assert kernels.intersect_sorted(arr(1, 3, 5, 7), arr(3, 4, 5, 9)).tolist() == [3, 5]
    assert kernels.intersect_sorted(arr(), arr(1)).tolist() == []


def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(42)
    for _ in range(25):
        values = rng.integers(0, 500, size=rng.integers(0, 400)).astype(np.int64)
        sset = np.unique(rng.integers(0, 500, size=rng.integers(0, 80)).astype(np.int64))
        keys = rng.integers(0, 60, size=values.shape[0]).astype(np.int64)
        weights = rng.integers(1, 5, size=values.shape[0]).astype(np.int64)

        kernels.set_backend("numpy")
        m1 = kernels.membership_mask(values, sset)
        a1 = kernels.aggregate_scores(keys, weights)
        i1 = kernels.intersect_sorted(np.unique(values), sset)
        kernels.set_backend("numba")
        m2 = kernels.membership_mask(values, sset)
        a2 = kernels.aggregate_scores(keys, weights)
        i2 = kernels.intersect_sorted(np.unique(values), sset)
        kernels.set_backend("auto")

        assert (m1 == m2).all()
        assert (a1[0] == a2[0]).all() and (a1[1] == a2[1]).all()
        assert (i1 == i2).all()


def test_membership_matches_python_sets(backend):
    rng = np.random.default_rng(7)
    values = rng.integers(0, 100, size=300).astype(np.int64)
    sset = np.unique(rng.integers(0, 100, size=30).astype(np.int64))
    expected = [v in set(sset.tolist()) for v in values.tolist()]
    assert kernels.membership_mask(values, sset).tolist() == expected
