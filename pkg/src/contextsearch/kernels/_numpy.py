"""Pure-numpy implementations of the hot posting-list kernels."""

import numpy as np


def membership_mask(values, sorted_set):
    """Boolean mask: values[i] in sorted_set (sorted, unique)."""
    out = np.zeros(values.shape[0], dtype=np.bool_)
    if sorted_set.shape[0] == 0 or values.shape[0] == 0:
        return out
    idx = np.searchsorted(sorted_set, values)
    inside = idx < sorted_set.shape[0]
    out[inside] = sorted_set[idx[inside]] == values[inside]
    return out


def aggregate_scores(keys, weights):
    """(unique keys sorted ascending, per-key weight sums)."""
    if keys.shape[0] == 0:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    w = weights[order]
    first = np.empty(k.shape[0], dtype=np.bool_)
    first[0] = True
    first[1:] = k[1:] != k[:-1]
    uniq = k[first]
    sums = np.add.reduceat(w, np.flatnonzero(first))
    return uniq, sums.astype(np.int64)


def dedup_mask(cids, iids, positions):
    """Keep-mask removing adjacent duplicate (cid, iid, position) rows; input lexsorted."""
    n = cids.shape[0]
    keep = np.empty(n, dtype=np.bool_)
    if n == 0:
        return keep
    keep[0] = True
    keep[1:] = ((cids[1:] != cids[:-1]) | (iids[1:] != iids[:-1])
                | (positions[1:] != positions[:-1]))
    return keep


def intersect_sorted(a, b):
    """Intersection of two sorted unique int64 arrays."""
    return np.intersect1d(a, b, assume_unique=True)
