"""Constituent recombination: evaluate a SCI tree into context token sequences.

Sub-clauses are detached and processed on their own (with their head, if any,
prepended while also staying in the remainder); enumerations contribute the
union of their children's context sets, concatenations the cross-product.
Separator leaves never reach a context.
"""

from __future__ import annotations

from typing import List, Optional

from .sci import CONC, ENUM, LEAF, SUB, SciNode


def recombine(sci: SciNode) -> List[List[int]]:
    """All context token-index sequences of ``sci``, sub-clause contexts first."""
    contexts: List[List[int]] = []
    _process_tree(sci, contexts)
    return [c for c in contexts if c]


def _process_tree(root: SciNode, out: List[List[int]]):
    subs: List[SciNode] = []
    remainder = _detach_subs(root, subs)
    for sub in subs:
        children = []
        if sub.head is not None:
            children.append(SciNode(kind=LEAF, start=sub.head[0], end=sub.head[1]))
        children.extend(sub.children)
        _process_tree(SciNode(kind=CONC, children=children), out)
    if remainder is not None:
        out.extend(_evaluate(remainder))


def _detach_subs(node: SciNode, collected: List[SciNode]) -> Optional[SciNode]:
    """Remove topmost SUB descendants, pruning nodes that become empty."""
    if node.kind == SUB:
        collected.append(node)
        return None
    if node.kind == LEAF:
        return node
    kept = []
    for ch in node.children:
        res = _detach_subs(ch, collected)
        if res is not None:
            kept.append(res)
    if not any(ch.kind != LEAF or not ch.separator for ch in kept):
        return None
    node.children = kept
    return node


def _evaluate(node: SciNode) -> List[List[int]]:
    if node.kind == LEAF:
        if node.separator:
            return []
        return [list(range(node.start, node.end))]
    parts = [_evaluate(ch) for ch in node.children]
    parts = [p for p in parts if p]
    if node.kind == ENUM:
        out: List[List[int]] = []
        for p in parts:
            out.extend(p)
        return out
    # CONC and SUB content: in-order concatenation (cross-product)
    result: List[List[int]] = [[]]
    for p in parts:
        result = [r + c for r in result for c in p]
    return result
