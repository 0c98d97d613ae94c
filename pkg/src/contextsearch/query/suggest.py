"""Context-sensitive suggestions: the four ranked lists behind search-as-you-type.

Every offered suggestion leads to at least one hit when applied: classes are
subclasses whose instances intersect the focus results, instances are hits
themselves, relations have facts out of the hit set, and words co-occur with a
hit entity in some context (and with the committed items of the focused arc).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .. import kernels
from ..errors import FocusPathError
from ..index import (ENTITY_BASE, SearchIndex, filter_contexts_by_entities,
                     intersect)
from ..ontology import Ontology
from .engine import EvalConfig, ResultSet, evaluate
from .grammar import Arc, QueryNode, QueryTree, _compatible
from .rewrite import copy_node, parse_focus, resolve_focus, _reroot


@dataclass
class SuggestionEntry:
    label: str
    score: int
    reverse: bool = False        # relation entries only
    source: Optional[str] = None  # relation entries: class name of the near side
    target: Optional[str] = None  # relation entries: class name of the far side


@dataclass
class Suggestions:
    words: List[SuggestionEntry] = field(default_factory=list)
    classes: List[SuggestionEntry] = field(default_factory=list)
    instances: List[SuggestionEntry] = field(default_factory=list)
    relations: List[SuggestionEntry] = field(default_factory=list)
    preselected: Optional[Tuple[str, int]] = None    # (list name, index)


@dataclass
class SuggestConfig:
    list_length: int = 8
    priority: Tuple[str, ...] = ("exact-class", "exact-instance", "relation",
                                 "word", "class", "instance")


def _norm(text: str) -> str:
    return text.replace("_", " ").strip().lower()


def _name_matches(name: str, typed: str) -> bool:
    return _norm(name).startswith(_norm(typed))


def suggest(tree: Optional[QueryTree], focus: str, typed: str, index: SearchIndex,
            config: Optional[SuggestConfig] = None,
            eval_config: Optional[EvalConfig] = None) -> Suggestions:
    cfg = config or SuggestConfig()
    onto = index.ontology
    if tree is None:
        out = _suggest_empty_query(typed, index, onto)
    else:
        steps = parse_focus(focus)
        node, arc_idx = resolve_focus(tree, steps)
        if arc_idx is not None:
            out = _suggest_for_arc(tree, steps, typed, index, onto, eval_config)
        else:
            out = _suggest_for_node(tree, steps, node, typed, index, onto, eval_config)
    _finish(out, typed, cfg)
    return out


def _suggest_empty_query(typed: str, index: SearchIndex, onto: Ontology) -> Suggestions:
    out = Suggestions()
    for cid, name in enumerate(onto.class_names):
        if not _name_matches(name, typed):
            continue
        members = onto.instances_of(cid)
        if members.shape[0]:
            out.classes.append(SuggestionEntry(label=name, score=int(members.shape[0])))
    occ = _entity_occurrence_counts(index)
    for eid, name in enumerate(onto.entity_names):
        if _name_matches(name, typed):
            out.instances.append(SuggestionEntry(label=name, score=occ.get(eid, 0)))
    for rel in onto.relations.values():
        if _name_matches(rel.name, typed) and rel.fact_count:
            out.relations.append(SuggestionEntry(
                label=rel.name, score=rel.fact_count,
                source=onto.class_name(rel.source_class),
                target=onto.class_name(rel.target_class)))
    # a bare word cannot start a tree query, so no word suggestions here
    return out


def _entity_occurrence_counts(index: SearchIndex) -> Dict[int, int]:
    cached = getattr(index, "_entity_occ_counts", None)
    if cached is None:
        lane = index.all_entity_occurrences()
        ids, sums = kernels.aggregate_scores(lane.iids - ENTITY_BASE, lane.scores)
        cached = dict(zip(ids.tolist(), sums.tolist()))
        index._entity_occ_counts = cached
    return cached


def _result_scores(rs: ResultSet) -> Tuple[np.ndarray, Dict[int, int]]:
    ids = np.array(sorted(g.entity for g in rs.groups), dtype=np.int64)
    return ids, {g.entity: g.score for g in rs.groups}


def _evaluate_at(tree: QueryTree, steps, index: SearchIndex,
                 eval_config) -> ResultSet:
    rerooted = QueryTree(root=_reroot(copy_node(tree.root), steps))
    return evaluate(rerooted, index, eval_config)


def _suggest_for_node(tree: QueryTree, steps, focus_node: QueryNode, typed: str,
                      index: SearchIndex, onto: Ontology, eval_config) -> Suggestions:
    out = Suggestions()
    results = _evaluate_at(tree, steps, index, eval_config)
    r_ids, r_scores = _result_scores(results)
    if r_ids.shape[0] == 0:
        return out

    if focus_node.is_class():
        for cid in sorted(onto.descendants(focus_node.ref) - {focus_node.ref}):
            name = onto.class_name(cid)
            if not _name_matches(name, typed):
                continue
            members = onto.instances_of(cid)
            hits = members[kernels.membership_mask(members, r_ids)]
            if hits.shape[0]:
                score = sum(r_scores[int(e)] for e in hits)
                out.classes.append(SuggestionEntry(label=name, score=int(score)))

    for eid in r_ids.tolist():
        name = onto.entity_name(eid)
        if _name_matches(name, typed):
            out.instances.append(SuggestionEntry(label=name, score=r_scores[eid]))

    present = {(a.relation, a.reverse) for a in focus_node.arcs if a.kind == "ontology"}
    for rel in onto.relations.values():
        if not _name_matches(rel.name, typed):
            continue
        if _compatible(onto, focus_node, rel.source_class) and (rel.name, False) not in present:
            count = int(kernels.membership_mask(rel.subjects, r_ids).sum())
            if count:
                out.relations.append(SuggestionEntry(
                    label=rel.name, score=count,
                    source=onto.class_name(rel.source_class),
                    target=onto.class_name(rel.target_class)))
        if _compatible(onto, focus_node, rel.target_class) and (rel.name, True) not in present:
            count = int(kernels.membership_mask(rel.r_objects, r_ids).sum())
            if count:
                out.relations.append(SuggestionEntry(
                    label=rel.name, score=count, reverse=True,
                    source=onto.class_name(rel.target_class),
                    target=onto.class_name(rel.source_class)))

    if typed.strip():
        out.words = _word_candidates(index, typed.strip().lower(), r_ids,
                                     committed=None, onto=onto)
    return out


def _suggest_for_arc(tree: QueryTree, steps, typed: str, index: SearchIndex,
                     onto: Ontology, eval_config) -> Suggestions:
    out = Suggestions()
    node_steps = steps[:-1]
    arc_idx = int(steps[-1][1:])

    work = QueryTree(root=copy_node(tree.root))
    node, _ = resolve_focus(work, node_steps)
    arc = node.arcs[arc_idx]
    committed = list(arc.items)
    node.arcs = [a for i, a in enumerate(node.arcs) if i != arc_idx]
    if committed:
        node.arcs.append(Arc(kind="occurs-with", items=committed))
    results = _evaluate_at(work, node_steps, index, eval_config)
    r_ids, _ = _result_scores(results)
    if r_ids.shape[0] == 0:
        return out

    if typed.strip():
        out.words = _word_candidates(index, typed.strip().lower(), r_ids,
                                     committed=committed, onto=onto)
        out.instances = _entity_candidates(index, typed, r_ids, committed, onto)
    return out


def _committed_contexts(index: SearchIndex, r_ids: np.ndarray, committed,
                        onto: Ontology):
    from .engine import denotation

    lists = []
    for it in committed or []:
        if it.kind == "word":
            lists.append(index.fetch_block(it.word))
        elif it.kind == "prefix":
            lists.append(index.fetch_block(it.word + "*"))
    cl = intersect(lists) if lists else index.all_entity_occurrences()
    for it in committed or []:
        if it.kind == "subquery":
            cl, _ = filter_contexts_by_entities(cl, denotation(it.node, index, onto))
    cl, _ = filter_contexts_by_entities(cl, r_ids)
    return cl


def _word_candidates(index: SearchIndex, typed: str, r_ids: np.ndarray,
                     committed, onto: Ontology) -> List[SuggestionEntry]:
    block = index.fetch_block(typed + "*")
    if not len(block):
        return []
    cl = _committed_contexts(index, r_ids, committed, onto)
    if not len(cl):
        return []
    keep = kernels.membership_mask(block.cids, cl.context_ids())
    block = block.take(keep)
    words = block.word_mask()
    ids, sums = kernels.aggregate_scores(block.iids[words], block.scores[words])
    return [SuggestionEntry(label=index.vocab[int(w)], score=int(s))
            for w, s in zip(ids.tolist(), sums.tolist())]


def _entity_candidates(index: SearchIndex, typed: str, r_ids: np.ndarray,
                       committed, onto: Ontology) -> List[SuggestionEntry]:
    cl = _committed_contexts(index, r_ids, committed, onto)
    if not len(cl):
        return []
    ents = cl.entity_mask()
    ids, sums = kernels.aggregate_scores(cl.iids[ents] - ENTITY_BASE, cl.scores[ents])
    out = []
    for eid, s in zip(ids.tolist(), sums.tolist()):
        name = onto.entity_name(eid)
        if _name_matches(name, typed):
            out.append(SuggestionEntry(label=name, score=int(s)))
    return out


def _finish(out: Suggestions, typed: str, cfg: SuggestConfig):
    full = {}
    for attr in ("words", "classes", "instances", "relations"):
        entries = getattr(out, attr)
        entries.sort(key=lambda e: (-e.score, e.label))
        full[attr] = entries
        setattr(out, attr, entries[:cfg.list_length])

    def exact(attr):
        for i, e in enumerate(getattr(out, attr)):
            if _norm(e.label) == _norm(typed):
                return i
        for e in full[attr][cfg.list_length:]:
            if _norm(e.label) == _norm(typed):
                lst = getattr(out, attr)
                lst[-1] = e
                return len(lst) - 1
        return None

    if not typed.strip():
        exact_class = exact_instance = None
    else:
        exact_class = exact("classes")
        exact_instance = exact("instances")

    for rule in cfg.priority:
        if rule == "exact-class" and exact_class is not None:
            out.preselected = ("classes", exact_class)
            return
        if rule == "exact-instance" and exact_instance is not None:
            out.preselected = ("instances", exact_instance)
            return
        if rule in ("relation", "word", "class", "instance"):
            attr = {"relation": "relations", "word": "words",
                    "class": "classes", "instance": "instances"}[rule]
            if getattr(out, attr):
                out.preselected = (attr, 0)
                return
    out.preselected = None
