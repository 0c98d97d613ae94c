"""Context lists and entity lists: the columnar working sets of query processing.

A ContextList holds four parallel int64 columns (context id, word-or-entity id,
score, position), sorted by context id then item id then position. Entity ids
live above ENTITY_BASE so "entities after words" is a plain numeric order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .. import kernels

ENTITY_BASE = np.int64(1) << np.int64(32)


@dataclass
class ContextList:
    cids: np.ndarray
    iids: np.ndarray
    scores: np.ndarray
    positions: np.ndarray

    def __len__(self) -> int:
        return int(self.cids.shape[0])

    def take(self, mask_or_index) -> "ContextList":
        return ContextList(self.cids[mask_or_index], self.iids[mask_or_index],
                           self.scores[mask_or_index], self.positions[mask_or_index])

    def word_mask(self) -> np.ndarray:
        return self.iids < ENTITY_BASE

    def entity_mask(self) -> np.ndarray:
        return self.iids >= ENTITY_BASE

    def context_ids(self) -> np.ndarray:
        """Sorted unique context ids represented in the list."""
        return np.unique(self.cids)


@dataclass
class EntityList:
    ids: np.ndarray      # sorted unique entity ids
    scores: np.ndarray   # aggregated scores, parallel to ids

    def __len__(self) -> int:
        return int(self.ids.shape[0])


def empty_list() -> ContextList:
    z = np.empty(0, dtype=np.int64)
    return ContextList(z.copy(), z.copy(), z.copy(), z.copy())


def empty_entities() -> EntityList:
    z = np.empty(0, dtype=np.int64)
    return EntityList(z.copy(), z.copy())


def sort_postings(cids, iids, scores, positions) -> ContextList:
    order = np.lexsort((positions, iids, cids))
    return ContextList(np.ascontiguousarray(cids[order]),
                       np.ascontiguousarray(iids[order]),
                       np.ascontiguousarray(scores[order]),
                       np.ascontiguousarray(positions[order]))


def validate_sorted(cl: ContextList) -> bool:
    """Debug validator for the sort invariant."""
    if len(cl) < 2:
        return True
    c, i, p = cl.cids, cl.iids, cl.positions
    key_prev = (c[:-1], i[:-1], p[:-1])
    key_next = (c[1:], i[1:], p[1:])
    gt = ((key_next[0] > key_prev[0])
          | ((key_next[0] == key_prev[0]) & (key_next[1] > key_prev[1]))
          | ((key_next[0] == key_prev[0]) & (key_next[1] == key_prev[1])
             & (key_next[2] >= key_prev[2])))
    return bool(np.all(gt))


def entities_in_contexts(cl: ContextList, restrict_to: Optional[np.ndarray] = None) -> EntityList:
    """All entities occurring in the contexts of ``cl``, scores summed per entity."""
    mask = cl.entity_mask()
    eids = cl.iids[mask] - ENTITY_BASE
    scores = cl.scores[mask]
    if restrict_to is not None:
        keep = kernels.membership_mask(eids, np.asarray(restrict_to, dtype=np.int64))
        eids, scores = eids[keep], scores[keep]
    ids, sums = kernels.aggregate_scores(eids, scores)
    return EntityList(ids=ids, scores=sums)


def filter_contexts_by_entities(cl: ContextList, entities: np.ndarray
                                ) -> Tuple[ContextList, np.ndarray]:
    """Restrict ``cl`` to contexts containing at least one entity from ``entities``.

    Returns the filtered list plus a witness mask over its rows marking the
    matching entity postings.
    """
    entities = np.asarray(entities, dtype=np.int64)
    ent_rows = cl.entity_mask()
    match = ent_rows.copy()
    match[ent_rows] = kernels.membership_mask(cl.iids[ent_rows] - ENTITY_BASE, entities)
    surviving = np.unique(cl.cids[match])
    keep = kernels.membership_mask(cl.cids, surviving)
    return cl.take(keep), match[keep]


def intersect(lists: List[ContextList]) -> ContextList:
    """Postings restricted to context ids present in every input list.

    Word postings of all inputs are merged for the surviving contexts;
    duplicate rows (same cid, item, position) collapse to one.
    """
    if not lists:
        raise ValueError("intersect needs at least one list")
    if len(lists) == 1:
        return lists[0]
    common = lists[0].context_ids()
    for cl in lists[1:]:
        common = kernels.intersect_sorted(common, cl.context_ids())
        if common.shape[0] == 0:
            return empty_list()
    kept = [cl.take(kernels.membership_mask(cl.cids, common)) for cl in lists]
    cids = np.concatenate([k.cids for k in kept])
    iids = np.concatenate([k.iids for k in kept])
    scores = np.concatenate([k.scores for k in kept])
    positions = np.concatenate([k.positions for k in kept])
    merged = sort_postings(cids, iids, scores, positions)
    keep = kernels.dedup_mask(merged.cids, merged.iids, merged.positions)
    return merged.take(keep)


def filter_to_word(cl: ContextList, word_id: int) -> ContextList:
    """Keep only postings of one exact word; entities of surviving contexts stay."""
    return filter_to_word_range(cl, word_id, word_id + 1)


def filter_to_word_range(cl: ContextList, lo: int, hi: int) -> ContextList:
    """Keep word postings with lo <= id < hi; entities of surviving contexts stay."""
    word_match = (cl.iids >= lo) & (cl.iids < hi) & cl.word_mask()
    surviving = np.unique(cl.cids[word_match])
    keep = word_match | (cl.entity_mask()
                         & kernels.membership_mask(cl.cids, surviving))
    return cl.take(keep)
