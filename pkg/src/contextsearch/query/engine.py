"""Query evaluation: denotational semantics over the context-list index.

A node denotes a set of entities (one instance, or all transitive instances of
a class), narrowed by its arcs. An ontology arc keeps entities with a fact
into the child denotation; an occurs-with arc keeps entities that share one
context with all of the arc's words, prefixes and subquery entities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .. import kernels
from ..errors import QueryTooBroadError
from ..index import (ENTITY_BASE, SearchIndex, entities_in_contexts,
                     filter_contexts_by_entities, intersect)
from ..index.postings import ContextList, empty_list
from ..ontology import Ontology
from .grammar import Arc, QueryNode, QueryTree, to_text


@dataclass
class Evidence:
    arc_index: int
    arc_label: str
    kind: str                      # "context" | "fact"
    cid: Optional[int] = None
    fact: Optional[Tuple[int, str, int]] = None   # (subject, relation, object)


@dataclass
class ResultGroup:
    entity: int
    score: int
    evidence: List[Evidence] = field(default_factory=list)


@dataclass
class ResultSet:
    groups: List[ResultGroup]
    total: int

    def entity_ids(self) -> List[int]:
        return [g.entity for g in self.groups]

    def score_of(self, eid: int) -> int:
        for g in self.groups:
            if g.entity == eid:
                return g.score
        return 0


@dataclass
class EvalConfig:
    evidence_limit: int = 3
    rank_broccoli_first: bool = False


def _node_base(node: QueryNode, ontology: Ontology) -> np.ndarray:
    if node.kind == "instance":
        return np.array([node.ref], dtype=np.int64)
    return ontology.instances_of(node.ref)


def _ow_context_list(arc: Arc, index: SearchIndex,
                     ontology: Ontology) -> Tuple[ContextList, np.ndarray]:
    """Context list satisfying all items of an occurs-with arc, plus the union
    of the subquery denotations (for scoring)."""
    lists = []
    for item in arc.items:
        if item.kind == "word":
            lists.append(index.fetch_block(item.word))
        elif item.kind == "prefix":
            lists.append(index.fetch_block(item.word + "*"))
    if lists:
        cl = intersect(lists)
    else:
        cl = index.all_entity_occurrences()
    if len(cl) > index.config.max_postings:
        raise QueryTooBroadError(f"intermediate list of {len(cl)} postings; refine your query")
    sub_union = np.empty(0, dtype=np.int64)
    for item in arc.items:
        if item.kind == "subquery":
            den = denotation(item.node, index, ontology)
            cl, _ = filter_contexts_by_entities(cl, den)
            sub_union = np.union1d(sub_union, den)
    return cl, sub_union


def denotation(node: QueryNode, index: SearchIndex,
               ontology: Optional[Ontology] = None) -> np.ndarray:
    """Sorted entity ids satisfying the node and all of its arcs."""
    onto = ontology or index.ontology
    base = _node_base(node, onto)
    for arc in node.arcs:
        if base.shape[0] == 0:
            break
        if arc.kind == "ontology":
            base = _apply_ontology_arc(arc, base, index, onto)[0]
        else:
            cl, _ = _ow_context_list(arc, index, onto)
            entities = entities_in_contexts(cl, restrict_to=base)
            base = entities.ids
    return base


def _apply_ontology_arc(arc: Arc, base: np.ndarray, index: SearchIndex,
                        onto: Ontology) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Surviving entities plus the witnessing fact pairs (this-side, other-side)."""
    child = denotation(arc.target, index, onto)
    rel = onto.relations[arc.relation]
    if arc.reverse:
        ours, theirs = rel.r_objects, rel.r_subjects
    else:
        ours, theirs = rel.subjects, rel.objects
    keep = (kernels.membership_mask(ours, base)
            & kernels.membership_mask(theirs, child))
    pairs_this = ours[keep]
    pairs_other = theirs[keep]
    return np.unique(pairs_this), pairs_this, pairs_other


def evaluate(tree: QueryTree, index: SearchIndex,
             config: Optional[EvalConfig] = None) -> ResultSet:
    """Evaluate a parsed, type-checked query into a ranked result set."""
    cfg = config or EvalConfig()
    onto = index.ontology
    root = tree.root

    survivors = denotation(root, index, onto)
    if survivors.shape[0] == 0:
        return ResultSet(groups=[], total=0)

    scores: Dict[int, int] = {int(e): 0 for e in survivors}
    evidence: Dict[int, List[Evidence]] = {int(e): [] for e in survivors}

    for arc_index, arc in enumerate(root.arcs):
        label = to_text(QueryTree(QueryNode(root.kind, root.ref, [arc])), onto)
        label = label.split(" ", 1)[1] if " " in label else label
        if arc.kind == "ontology":
            _, pairs_this, pairs_other = _apply_ontology_arc(arc, survivors, index, onto)
            for e, o in zip(pairs_this.tolist(), pairs_other.tolist()):
                if e not in scores:
                    continue
                scores[e] += 1
                if len([v for v in evidence[e] if v.arc_index == arc_index]) < cfg.evidence_limit:
                    fact = (o, arc.relation, e) if arc.reverse else (e, arc.relation, o)
                    evidence[e].append(Evidence(arc_index=arc_index, arc_label=label,
                                                kind="fact", fact=fact))
        else:
            cl, sub_union = _ow_context_list(arc, index, onto)
            cl, _ = filter_contexts_by_entities(cl, survivors)
            matched = cl.word_mask()
            if sub_union.shape[0]:
                ent_rows = cl.entity_mask()
                sub_match = ent_rows.copy()
                sub_match[ent_rows] = kernels.membership_mask(
                    cl.iids[ent_rows] - ENTITY_BASE, sub_union)
                matched = matched | sub_match
            ctx_ids, ctx_scores = kernels.aggregate_scores(
                cl.cids[matched], cl.scores[matched])
            score_of_ctx = dict(zip(ctx_ids.tolist(), ctx_scores.tolist()))
            ent_rows = cl.entity_mask()
            e_ids = (cl.iids[ent_rows] - ENTITY_BASE)
            e_cids = cl.cids[ent_rows]
            seen: set = set()
            for e, c in zip(e_ids.tolist(), e_cids.tolist()):
                if e not in scores or (e, c) in seen:
                    continue
                seen.add((e, c))
                scores[e] += score_of_ctx.get(c, 0)
                if len([v for v in evidence[e] if v.arc_index == arc_index]) < cfg.evidence_limit:
                    evidence[e].append(Evidence(arc_index=arc_index, arc_label=label,
                                                kind="context", cid=c))

    matches = [(int(e), scores[int(e)], evidence[int(e)]) for e in survivors]
    return rank_results(matches, onto, broccoli_first=cfg.rank_broccoli_first)


def rank_results(matches: List[Tuple[int, int, List[Evidence]]], ontology: Ontology,
                 broccoli_first: bool = False) -> ResultSet:
    """Order matches by score (desc), ties by entity id (asc).

    ``broccoli_first`` is the legacy flag that pins the entity named Broccoli
    to the top whenever it is among the hits.
    """
    groups = [ResultGroup(entity=e, score=s, evidence=ev) for e, s, ev in matches]
    groups.sort(key=lambda g: (-g.score, g.entity))
    if broccoli_first:
        broccoli = ontology.entity_id("Broccoli")
        if broccoli is not None:
            for i, g in enumerate(groups):
                if g.entity == broccoli and i > 0:
                    groups.insert(0, groups.pop(i))
                    break
    return ResultSet(groups=groups, total=len(groups))
