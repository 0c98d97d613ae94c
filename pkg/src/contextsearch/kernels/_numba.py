"""Numba-compiled implementations of the hot posting-list kernels.

Same contracts and bit-identical outputs as the numpy backend; the loops fuse
the binary searches and group scans that numpy has to do in several passes.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def membership_mask(values, sorted_set):
    n = values.shape[0]
    m = sorted_set.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    if m == 0:
        return out
    for i in range(n):
        v = values[i]
        lo, hi = 0, m
        while lo < hi:
            mid = (lo + hi) >> 1
            if sorted_set[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        out[i] = lo < m and sorted_set[lo] == v
    return out


@njit(cache=True)
def aggregate_scores(keys, weights):
    n = keys.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    order = np.argsort(keys)
    uniq = np.empty(n, dtype=np.int64)
    sums = np.zeros(n, dtype=np.int64)
    count = 0
    prev = 0
    for pos in range(n):
        i = order[pos]
        k = keys[i]
        if pos == 0 or k != prev:
            uniq[count] = k
            count += 1
            prev = k
        sums[count - 1] += weights[i]
    return uniq[:count].copy(), sums[:count].copy()


@njit(cache=True)
def dedup_mask(cids, iids, positions):
    n = cids.shape[0]
    keep = np.empty(n, dtype=np.bool_)
    if n == 0:
        return keep
    keep[0] = True
    for i in range(1, n):
        keep[i] = (cids[i] != cids[i - 1] or iids[i] != iids[i - 1]
                   or positions[i] != positions[i - 1])
    return keep


@njit(cache=True)
def intersect_sorted(a, b):
    na, nb = a.shape[0], b.shape[0]
    out = np.empty(min(na, nb), dtype=np.int64)
    i = j = k = 0
    while i < na and j < nb:
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out[k] = a[i]
            k += 1
            i += 1
            j += 1
    return out[:k].copy()
