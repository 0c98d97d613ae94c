"""Tree manipulation: focus paths, re-rooting, and applying suggestions.

A focus path addresses a node (or an occurs-with arc) of the query tree:

    ""          the root node
    "0"         target node of arc 0
    "1.2"       subquery node at item 2 of occurs-with arc 1
    "0/a1"      occurs-with arc 1 of the node reached via "0" (terminal step)

Steps are joined with "/"; an "aN" step can only come last.
"""

from __future__ import annotations

from dataclasses import replace
from typing import List, Optional, Tuple, Union

from ..errors import FocusPathError
from ..ontology import Ontology
from .grammar import Arc, OwItem, QueryNode, QueryTree

Step = Union[int, Tuple[int, int], str]


def copy_node(node: QueryNode) -> QueryNode:
    arcs = []
    for arc in node.arcs:
        if arc.kind == "ontology":
            arcs.append(Arc(kind="ontology", relation=arc.relation,
                            reverse=arc.reverse, target=copy_node(arc.target)))
        else:
            items = []
            for it in arc.items:
                if it.kind == "subquery":
                    items.append(OwItem(kind="subquery", node=copy_node(it.node)))
                else:
                    items.append(OwItem(kind=it.kind, word=it.word))
            arcs.append(Arc(kind="occurs-with", items=items))
    return QueryNode(kind=node.kind, ref=node.ref, arcs=arcs)


def parse_focus(text: str) -> List[Step]:
    text = (text or "").strip()
    if text in ("", "root"):
        return []
    steps: List[Step] = []
    parts = text.split("/")
    for i, part in enumerate(parts):
        if part.startswith("a"):
            if i != len(parts) - 1:
                raise FocusPathError("arc step must be last in a focus path")
            try:
                steps.append("a" + str(int(part[1:])))
            except ValueError:
                raise FocusPathError(f"bad focus step {part!r}")
        elif "." in part:
            a, b = part.split(".", 1)
            try:
                steps.append((int(a), int(b)))
            except ValueError:
                raise FocusPathError(f"bad focus step {part!r}")
        else:
            try:
                steps.append(int(part))
            except ValueError:
                raise FocusPathError(f"bad focus step {part!r}")
    return steps


def resolve_focus(tree: QueryTree, steps: List[Step]
                  ) -> Tuple[QueryNode, Optional[int]]:
    """The focused node, plus the focused occurs-with arc index if any."""
    node = tree.root
    for step in steps:
        if isinstance(step, str):          # "aN": arc focus, terminal
            idx = int(step[1:])
            if not 0 <= idx < len(node.arcs) or node.arcs[idx].kind != "occurs-with":
                raise FocusPathError(f"no occurs-with arc {idx} at this node")
            return node, idx
        if isinstance(step, tuple):
            a, b = step
            if not 0 <= a < len(node.arcs) or node.arcs[a].kind != "occurs-with":
                raise FocusPathError(f"no occurs-with arc {a} at this node")
            items = node.arcs[a].items
            if not 0 <= b < len(items) or items[b].kind != "subquery":
                raise FocusPathError(f"occurs-with item {b} is not a subquery node")
            node = items[b].node
        else:
            if not 0 <= step < len(node.arcs) or node.arcs[step].kind != "ontology":
                raise FocusPathError(f"no ontology arc {step} at this node")
            node = node.arcs[step].target
    return node, None


def change_focus(tree: QueryTree, path: str) -> QueryTree:
    """Validate the focus path; the tree itself is unchanged."""
    resolve_focus(tree, parse_focus(path))
    return tree


def change_root(tree: QueryTree, path: str) -> QueryTree:
    """Re-root the tree at the class/instance node addressed by ``path``.

    Every arc on the way flips its traversal direction; the remaining tree of
    the old root becomes a subtree (or occurs-with subquery) of the new root.
    """
    steps = parse_focus(path)
    if any(isinstance(s, str) for s in steps):
        raise FocusPathError("cannot re-root at an occurs-with arc")
    resolve_focus(tree, steps)
    return QueryTree(root=_reroot(copy_node(tree.root), steps))


def _reroot(node: QueryNode, steps: List[Step]) -> QueryNode:
    if not steps:
        return node
    step = steps[0]
    if isinstance(step, tuple):
        a, b = step
        arc = node.arcs[a]
        child = arc.items[b].node
        remainder = QueryNode(kind=node.kind, ref=node.ref,
                              arcs=[x for i, x in enumerate(node.arcs) if i != a])
        new_items = [it for i, it in enumerate(arc.items) if i != b]
        new_items.append(OwItem(kind="subquery", node=remainder))
        child.arcs.append(Arc(kind="occurs-with", items=new_items))
        return _reroot(child, steps[1:])
    arc = node.arcs[step]
    child = arc.target
    remainder = QueryNode(kind=node.kind, ref=node.ref,
                          arcs=[x for i, x in enumerate(node.arcs) if i != step])
    child.arcs.append(Arc(kind="ontology", relation=arc.relation,
                          reverse=not arc.reverse, target=remainder))
    return _reroot(child, steps[1:])


def apply_suggestion(tree: Optional[QueryTree], focus: str, kind: str, payload,
                     ontology: Ontology) -> QueryTree:
    """Apply one suggestion entry to the tree, returning a new tree.

    ``payload`` is the suggestion label (class / instance / word name) or the
    (relation, reverse) pair for relation suggestions.
    """
    if tree is None:
        if kind == "class":
            return QueryTree(root=QueryNode(kind="class", ref=ontology.class_ids[payload]))
        if kind == "instance":
            return QueryTree(root=QueryNode(kind="instance", ref=ontology.entity_ids[payload]))
        if kind == "relation":
            rel_name, reverse = payload
            rel = ontology.relations[rel_name]
            root_cls = rel.target_class if reverse else rel.source_class
            target_cls = rel.source_class if reverse else rel.target_class
            return QueryTree(root=QueryNode(
                kind="class", ref=root_cls,
                arcs=[Arc(kind="ontology", relation=rel_name, reverse=reverse,
                          target=QueryNode(kind="class", ref=target_cls))]))
        raise FocusPathError(f"cannot start a query with a {kind} suggestion")

    steps = parse_focus(focus)
    new_tree = QueryTree(root=copy_node(tree.root))
    node, arc_idx = resolve_focus(new_tree, steps)

    if kind == "word":
        if arc_idx is not None:
            node.arcs[arc_idx].items.append(OwItem(kind="word", word=payload.lower()))
        else:
            node.arcs.append(Arc(kind="occurs-with",
                                 items=[OwItem(kind="word", word=payload.lower())]))
        return new_tree
    if arc_idx is not None:
        if kind == "instance":
            node.arcs[arc_idx].items.append(OwItem(
                kind="subquery",
                node=QueryNode(kind="instance", ref=ontology.entity_ids[payload])))
            return new_tree
        raise FocusPathError(f"cannot apply a {kind} suggestion to an occurs-with arc")
    if kind == "class":
        node.kind = "class"
        node.ref = ontology.class_ids[payload]
        return new_tree
    if kind == "instance":
        node.kind = "instance"
        node.ref = ontology.entity_ids[payload]
        return new_tree
    if kind == "relation":
        rel_name, reverse = payload
        rel = ontology.relations[rel_name]
        target_cls = rel.source_class if reverse else rel.target_class
        node.arcs.append(Arc(kind="ontology", relation=rel_name, reverse=reverse,
                             target=QueryNode(kind="class", ref=target_cls)))
        return new_tree
    raise FocusPathError(f"unknown suggestion kind {kind!r}")
