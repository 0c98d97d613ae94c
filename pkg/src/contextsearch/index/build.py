"""Index construction and the in-memory searchable index.

The index keeps one posting block per word prefix (whole words shorter than
the prefix length get their own block). A block holds every occurrence of a
word starting with the prefix, plus one posting for every entity occurrence in
each context the block touches, so entity and context filtering never leave
the block data. A reserved lane holds all entity occurrences for query arcs
that carry no word at all.
"""

from __future__ import annotations

import bisect
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..contexts import Context
from ..corpus import is_punctuation
from ..errors import QueryTooBroadError
from ..ontology import Ontology
from .excerpts import Excerpt, ExcerptStore, build_excerpt
from .postings import (ENTITY_BASE, ContextList, empty_list, sort_postings)

ENTITY_LANE_KEY = "\x00entities"
_PREFIX_SENTINEL = "\U0010FFFF"


@dataclass
class IndexConfig:
    prefix_len: int = 4
    min_prefix: int = 1
    max_postings: int = 10_000_000


@dataclass
class IndexStats:
    contexts: int = 0
    postings: int = 0
    blocks: int = 0
    entities: int = 0
    words: int = 0


@dataclass
class SearchIndex:
    config: IndexConfig
    generation: int
    ontology: Ontology
    vocab: List[str]
    blocks: Dict[str, ContextList]
    block_keys: List[str]               # sorted
    entity_lane: ContextList
    excerpts: ExcerptStore
    stats: IndexStats
    word_ids: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.word_ids:
            self.word_ids = {w: i for i, w in enumerate(self.vocab)}

    # -- lookups ----------------------------------------------------------

    def block_key(self, word: str) -> str:
        k = self.config.prefix_len
        return word if len(word) < k else word[:k]

    def word_range(self, prefix: str) -> Tuple[int, int]:
        lo = bisect.bisect_left(self.vocab, prefix)
        hi = bisect.bisect_left(self.vocab, prefix + _PREFIX_SENTINEL)
        return lo, hi

    def words_with_prefix(self, prefix: str) -> List[str]:
        lo, hi = self.word_range(prefix)
        return self.vocab[lo:hi]

    # -- fetch ------------------------------------------------------------

    def fetch_block(self, query: str) -> ContextList:
        """Context list for a prefix query (trailing ``*``) or an exact word.

        Unknown prefixes and words yield an empty list. Prefixes shorter than
        the block length merge all blocks in the key range; exact words and
        over-long prefixes are post-filtered inside their block, keeping the
        entity postings of the surviving contexts.
        """
        from .postings import filter_to_word, filter_to_word_range

        if query.endswith("*"):
            prefix = query[:-1].lower()
            if len(prefix) < max(1, self.config.min_prefix):
                return empty_list()
            k = self.config.prefix_len
            if len(prefix) >= k:
                block = self.blocks.get(prefix[:k])
                if block is None:
                    return empty_list()
                if len(prefix) == k:
                    return block
                lo, hi = self.word_range(prefix)
                if lo == hi:
                    return empty_list()
                return filter_to_word_range(block, lo, hi)
            return self._merge_key_range(prefix)
        word = query.lower()
        wid = self.word_ids.get(word)
        if wid is None:
            return empty_list()
        block = self.blocks.get(self.block_key(word))
        if block is None:
            return empty_list()
        return filter_to_word(block, wid)

    def _merge_key_range(self, prefix: str) -> ContextList:
        from .. import kernels

        lo = bisect.bisect_left(self.block_keys, prefix)
        hi = bisect.bisect_left(self.block_keys, prefix + _PREFIX_SENTINEL)
        selected = [self.blocks[k] for k in self.block_keys[lo:hi]]
        selected = [b for b in selected if len(b)]
        if not selected:
            return empty_list()
        if len(selected) == 1:
            return selected[0]
        total = sum(len(b) for b in selected)
        if total > self.config.max_postings:
            raise QueryTooBroadError(
                f"prefix {prefix!r}* touches {total} postings; refine your query")
        merged = sort_postings(
            np.concatenate([b.cids for b in selected]),
            np.concatenate([b.iids for b in selected]),
            np.concatenate([b.scores for b in selected]),
            np.concatenate([b.positions for b in selected]))
        keep = kernels.dedup_mask(merged.cids, merged.iids, merged.positions)
        return merged.take(keep)

    def all_entity_occurrences(self) -> ContextList:
        return self.entity_lane

    def excerpt(self, cid: int) -> Excerpt:
        return self.excerpts.get(cid)


def build_index(contexts: Iterable[Context], ontology: Ontology,
                config: Optional[IndexConfig] = None,
                generation: Optional[int] = None) -> SearchIndex:
    """Build the in-memory index over a stream of contexts.

    Context ids must be dense and increasing. Word postings carry score 1 per
    occurrence; every entity occurrence is mirrored into each block its
    context appears in. Pure-punctuation tokens are not indexed.
    """
    cfg = config or IndexConfig()
    contexts = list(contexts)
    last_cid = -1
    for ctx in contexts:
        if ctx.cid <= last_cid:
            raise ValueError(f"context ids must be increasing, got {ctx.cid} after {last_cid}")
        last_cid = ctx.cid

    word_rows: List[Tuple[int, str, int]] = []   # (cid, word, position)
    ent_rows: List[Tuple[int, int, int]] = []    # (cid, entity, position)
    seen_entities = set()
    for ctx in contexts:
        for it in ctx.items:
            if it.word is not None:
                if not is_punctuation(it.word):
                    word_rows.append((ctx.cid, it.word.lower(), it.position))
            else:
                if not 0 <= it.entity < int(ENTITY_BASE):
                    raise ValueError(f"entity id {it.entity} overflows the id space")
                ent_rows.append((ctx.cid, it.entity, it.position))
                seen_entities.add(it.entity)

    vocab = sorted({w for _, w, _ in word_rows})
    word_ids = {w: i for i, w in enumerate(vocab)}
    k = cfg.prefix_len
    block_keys = sorted({w if len(w) < k else w[:k] for w in vocab})
    block_id_of = {key: i for i, key in enumerate(block_keys)}
    word_block = np.array(
        [block_id_of[w if len(w) < k else w[:k]] for w in vocab], dtype=np.int64)

    w_cid = np.array([r[0] for r in word_rows], dtype=np.int64)
    w_iid = np.array([word_ids[r[1]] for r in word_rows], dtype=np.int64)
    w_pos = np.array([r[2] for r in word_rows], dtype=np.int64)
    w_blk = word_block[w_iid] if len(word_rows) else np.empty(0, dtype=np.int64)

    e_cid = np.array([r[0] for r in ent_rows], dtype=np.int64)
    e_iid = np.array([r[1] for r in ent_rows], dtype=np.int64) + ENTITY_BASE
    e_pos = np.array([r[2] for r in ent_rows], dtype=np.int64)

    blocks = _assemble_blocks(block_keys, w_blk, w_cid, w_iid, w_pos, e_cid, e_iid, e_pos)
    entity_lane = sort_postings(e_cid, e_iid, np.ones_like(e_cid), e_pos)

    store = ExcerptStore()
    for ctx in contexts:
        store.records[ctx.cid] = build_excerpt(ctx, ontology)

    stats = IndexStats(
        contexts=len(contexts),
        postings=sum(len(b) for b in blocks.values()),
        blocks=len(blocks),
        entities=len(seen_entities),
        words=len(vocab),
    )
    return SearchIndex(
        config=cfg,
        generation=generation if generation is not None else time.time_ns(),
        ontology=ontology,
        vocab=vocab,
        blocks=blocks,
        block_keys=block_keys,
        entity_lane=entity_lane,
        excerpts=store,
        stats=stats,
        word_ids=word_ids,
    )


def _assemble_blocks(block_keys, w_blk, w_cid, w_iid, w_pos,
                     e_cid, e_iid, e_pos) -> Dict[str, ContextList]:
    """Group word postings by block and mirror entity occurrences into each
    (block, context) pair that has at least one word posting."""
    blocks: Dict[str, ContextList] = {}
    if w_cid.shape[0] == 0:
        return blocks

    order = np.lexsort((w_pos, w_iid, w_cid, w_blk))
    w_blk, w_cid, w_iid, w_pos = w_blk[order], w_cid[order], w_iid[order], w_pos[order]

    # entity rows grouped by context for ragged gathering
    e_order = np.lexsort((e_pos, e_iid, e_cid))
    e_cid_s, e_iid_s, e_pos_s = e_cid[e_order], e_iid[e_order], e_pos[e_order]
    ent_ctx, ent_start = np.unique(e_cid_s, return_index=True)
    ent_count = np.diff(np.append(ent_start, e_cid_s.shape[0]))

    # distinct (block, context) pairs among the word postings
    pair_first = np.empty(w_blk.shape[0], dtype=np.bool_)
    pair_first[0] = True
    pair_first[1:] = (w_blk[1:] != w_blk[:-1]) | (w_cid[1:] != w_cid[:-1])
    p_blk = w_blk[pair_first]
    p_cid = w_cid[pair_first]

    # gather entity rows for every pair whose context has entities
    if ent_ctx.shape[0]:
        idx = np.searchsorted(ent_ctx, p_cid)
        idx_c = np.minimum(idx, ent_ctx.shape[0] - 1)
        has_ent = ent_ctx[idx_c] == p_cid
        pos_in_ent = idx_c
    else:
        has_ent = np.zeros(p_cid.shape[0], dtype=np.bool_)
        pos_in_ent = np.zeros(p_cid.shape[0], dtype=np.int64)
    q_blk = p_blk[has_ent]
    q_start = ent_start[pos_in_ent[has_ent]]
    q_count = ent_count[pos_in_ent[has_ent]]
    total = int(q_count.sum())
    if total:
        grp_base = np.repeat(np.cumsum(q_count) - q_count, q_count)
        offs = np.arange(total, dtype=np.int64) - grp_base
        gather = np.repeat(q_start, q_count) + offs
        g_blk = np.repeat(q_blk, q_count)
        g_cid = e_cid_s[gather]
        g_iid = e_iid_s[gather]
        g_pos = e_pos_s[gather]
    else:
        g_blk = np.empty(0, dtype=np.int64)
        g_cid = g_iid = g_pos = np.empty(0, dtype=np.int64)

    all_blk = np.concatenate([w_blk, g_blk])
    all_cid = np.concatenate([w_cid, g_cid])
    all_iid = np.concatenate([w_iid, g_iid])
    all_pos = np.concatenate([w_pos, g_pos])
    order = np.lexsort((all_pos, all_iid, all_cid, all_blk))
    all_blk, all_cid, all_iid, all_pos = (all_blk[order], all_cid[order],
                                          all_iid[order], all_pos[order])
    boundaries = np.flatnonzero(np.r_[True, all_blk[1:] != all_blk[:-1]])
    ends = np.r_[boundaries[1:], all_blk.shape[0]]
    for b, (s, e) in zip(all_blk[boundaries], zip(boundaries, ends)):
        key = block_keys[int(b)]
        blocks[key] = ContextList(
            cids=np.ascontiguousarray(all_cid[s:e]),
            iids=np.ascontiguousarray(all_iid[s:e]),
            scores=np.ones(e - s, dtype=np.int64),
            positions=np.ascontiguousarray(all_pos[s:e]))
    return blocks
