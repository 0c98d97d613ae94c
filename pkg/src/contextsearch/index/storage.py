"""Binary persistence: index.contexts, index.relations, index.excerpts.

Every file starts with magic ``BRIX``, a u32 format version and a u64
generation stamp; the stamp must agree across all three files. Posting
columns are fixed-width 8-byte little-endian integers, uncompressed.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Tuple

import numpy as np

from ..errors import IndexFormatError
from ..ontology import Ontology, Relation
from .build import ENTITY_LANE_KEY, IndexConfig, IndexStats, SearchIndex
from .excerpts import Excerpt, ExcerptStore
from .postings import ContextList, empty_list

MAGIC = b"BRIX"
VERSION = 1

CONTEXTS_FILE = "index.contexts"
RELATIONS_FILE = "index.relations"
EXCERPTS_FILE = "index.excerpts"


@dataclass
class IndexFiles:
    contexts: Path
    relations: Path
    excerpts: Path
    generation: int


def write_index(index: SearchIndex, out_dir) -> IndexFiles:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    gen = index.generation
    _write_contexts(index, out / CONTEXTS_FILE, gen)
    _write_relations(index.ontology, out / RELATIONS_FILE, gen)
    _write_excerpts(index.excerpts, out / EXCERPTS_FILE, gen)
    return IndexFiles(contexts=out / CONTEXTS_FILE, relations=out / RELATIONS_FILE,
                      excerpts=out / EXCERPTS_FILE, generation=gen)


def open_index(index_dir) -> SearchIndex:
    d = Path(index_dir)
    cfg, gen_c, vocab, blocks, stats_ctx = _read_contexts(d / CONTEXTS_FILE)
    ontology, gen_r = _read_relations(d / RELATIONS_FILE)
    store, gen_e = _read_excerpts(d / EXCERPTS_FILE)
    if not (gen_c == gen_r == gen_e):
        raise IndexFormatError(
            f"generation stamps disagree: {gen_c}, {gen_r}, {gen_e}")
    entity_lane = blocks.pop(ENTITY_LANE_KEY, empty_list())
    seen_entities = set(np.unique(entity_lane.iids).tolist())
    stats = IndexStats(contexts=stats_ctx, postings=sum(len(b) for b in blocks.values()),
                       blocks=len(blocks), entities=len(seen_entities), words=len(vocab))
    return SearchIndex(
        config=cfg, generation=gen_c, ontology=ontology, vocab=vocab,
        blocks=blocks, block_keys=sorted(blocks), entity_lane=entity_lane,
        excerpts=store, stats=stats)


def _header(gen: int) -> bytes:
    return MAGIC + struct.pack("<IQ", VERSION, gen)


def _check_header(buf: bytes, path) -> Tuple[int, int]:
    if len(buf) < 16 or buf[:4] != MAGIC:
        raise IndexFormatError(f"{path}: bad magic (not an index file)")
    version, gen = struct.unpack_from("<IQ", buf, 4)
    if version != VERSION:
        raise IndexFormatError(f"{path}: unsupported format version {version}")
    return gen, 16


def _write_str(fh, s: str):
    raw = s.encode("utf-8")
    fh.write(struct.pack("<H", len(raw)))
    fh.write(raw)


def _read_str(buf: bytes, off: int) -> Tuple[str, int]:
    (n,) = struct.unpack_from("<H", buf, off)
    off += 2
    return buf[off:off + n].decode("utf-8"), off + n


def _write_contexts(index: SearchIndex, path: Path, gen: int):
    entries = sorted(index.blocks.items())
    entries.append((ENTITY_LANE_KEY, index.entity_lane))
    with open(path, "wb") as fh:
        fh.write(_header(gen))
        fh.write(struct.pack("<IIQ", index.config.prefix_len, index.config.min_prefix,
                             index.stats.contexts))
        fh.write(struct.pack("<I", len(index.vocab)))
        for w in index.vocab:
            _write_str(fh, w)
        fh.write(struct.pack("<I", len(entries)))
        offset = 0
        for key, cl in entries:
            _write_str(fh, key)
            fh.write(struct.pack("<QQ", offset, len(cl)))
            offset += 4 * 8 * len(cl)
        for _, cl in entries:
            for col in (cl.cids, cl.iids, cl.scores, cl.positions):
                fh.write(np.ascontiguousarray(col, dtype="<i8").tobytes())


def _read_contexts(path: Path):
    try:
        buf = Path(path).read_bytes()
    except FileNotFoundError:
        raise IndexFormatError(f"missing index file {path}")
    gen, off = _check_header(buf, path)
    prefix_len, min_prefix, n_contexts = struct.unpack_from("<IIQ", buf, off)
    off += 16
    (n_words,) = struct.unpack_from("<I", buf, off)
    off += 4
    vocab = []
    for _ in range(n_words):
        w, off = _read_str(buf, off)
        vocab.append(w)
    (n_blocks,) = struct.unpack_from("<I", buf, off)
    off += 4
    directory = []
    for _ in range(n_blocks):
        key, off = _read_str(buf, off)
        rel_off, count = struct.unpack_from("<QQ", buf, off)
        off += 16
        directory.append((key, rel_off, count))
    payload_start = off
    blocks: Dict[str, ContextList] = {}
    for key, rel_off, count in directory:
        base = payload_start + rel_off
        cols = []
        for c in range(4):
            start = base + c * 8 * count
            cols.append(np.frombuffer(buf, dtype="<i8", count=count,
                                      offset=start).astype(np.int64))
        blocks[key] = ContextList(*cols)
    cfg = IndexConfig(prefix_len=prefix_len, min_prefix=min_prefix)
    return cfg, gen, vocab, blocks, int(n_contexts)


def _write_relations(onto: Ontology, path: Path, gen: int):
    meta = {
        "entity_names": onto.entity_names,
        "class_names": onto.class_names,
        "parents": [sorted(p) for p in onto.parents],
        "entity_classes": [sorted(c) for c in onto.entity_classes],
        "relations": [
            {"name": r.name, "source": r.source_class, "target": r.target_class}
            for r in onto.relations.values()
        ],
    }
    raw = json.dumps(meta, ensure_ascii=False).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_header(gen))
        fh.write(struct.pack("<Q", len(raw)))
        fh.write(raw)
        for r in onto.relations.values():
            fh.write(struct.pack("<Q", r.fact_count))
            for col in (r.subjects, r.objects, r.r_objects, r.r_subjects):
                fh.write(np.ascontiguousarray(col, dtype="<i8").tobytes())


def _read_relations(path: Path) -> Tuple[Ontology, int]:
    try:
        buf = Path(path).read_bytes()
    except FileNotFoundError:
        raise IndexFormatError(f"missing index file {path}")
    gen, off = _check_header(buf, path)
    (meta_len,) = struct.unpack_from("<Q", buf, off)
    off += 8
    meta = json.loads(buf[off:off + meta_len].decode("utf-8"))
    off += meta_len

    onto = Ontology()
    onto.entity_names = list(meta["entity_names"])
    onto.entity_ids = {n: i for i, n in enumerate(onto.entity_names)}
    onto.class_names = list(meta["class_names"])
    onto.class_ids = {n: i for i, n in enumerate(onto.class_names)}
    onto.root = onto.class_ids.get("Entity", 0)
    onto.parents = [set(p) for p in meta["parents"]]
    onto.children = [set() for _ in onto.class_names]
    for cid, ps in enumerate(onto.parents):
        for p in ps:
            onto.children[p].add(cid)
    onto.entity_classes = [set(c) for c in meta["entity_classes"]]
    onto.direct_members = [set() for _ in onto.class_names]
    for eid, cls in enumerate(onto.entity_classes):
        for c in cls:
            onto.direct_members[c].add(eid)
    for rmeta in meta["relations"]:
        (count,) = struct.unpack_from("<Q", buf, off)
        off += 8
        cols = []
        for c in range(4):
            cols.append(np.frombuffer(buf, dtype="<i8", count=count,
                                      offset=off).astype(np.int64))
            off += 8 * count
        onto.relations[rmeta["name"]] = Relation(
            name=rmeta["name"], source_class=int(rmeta["source"]),
            target_class=int(rmeta["target"]),
            subjects=cols[0], objects=cols[1], r_objects=cols[2], r_subjects=cols[3])
    return onto, gen


def _write_excerpts(store: ExcerptStore, path: Path, gen: int):
    cids = sorted(store.records)
    payloads = []
    for cid in cids:
        payloads.append(json.dumps(store.records[cid].to_json(),
                                   ensure_ascii=False).encode("utf-8"))
    with open(path, "wb") as fh:
        fh.write(_header(gen))
        fh.write(struct.pack("<Q", len(cids)))
        offset = 0
        for cid, raw in zip(cids, payloads):
            fh.write(struct.pack("<QQQ", cid, offset, len(raw)))
            offset += len(raw)
        for raw in payloads:
            fh.write(raw)


def _read_excerpts(path: Path) -> Tuple[ExcerptStore, int]:
    try:
        buf = Path(path).read_bytes()
    except FileNotFoundError:
        raise IndexFormatError(f"missing index file {path}")
    gen, off = _check_header(buf, path)
    (n,) = struct.unpack_from("<Q", buf, off)
    off += 8
    directory = []
    for _ in range(n):
        cid, rel_off, length = struct.unpack_from("<QQQ", buf, off)
        off += 24
        directory.append((cid, rel_off, length))
    payload_start = off
    store = ExcerptStore()
    for cid, rel_off, length in directory:
        raw = buf[payload_start + rel_off:payload_start + rel_off + length]
        rec = json.loads(raw.decode("utf-8"))
        store.records[int(cid)] = Excerpt(
            cid=int(rec["cid"]), doc=rec["doc"], title=rec["title"],
            text=rec["text"], active=[tuple(s) for s in rec["active"]])
    return store, gen
