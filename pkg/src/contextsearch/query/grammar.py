"""Query trees and their text / JSON forms.

Grammar (UTF-8, whitespace separated):

    node   := ref arc*
    ref    := "class:"NAME | "entity:"NAME
    arc    := "(" RELNAME node ")" | "(occurs-with" owitem+ ")"
    owitem := WORD | PREFIX"*" | node

Names containing spaces are written with underscores. A relation name may end
in "~" to traverse the relation from the object side (the serialized form of a
re-rooted arc); without the marker the direction is inferred from the types.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from ..errors import QueryParseError, QueryTypingError, UnknownNameError
from ..ontology import Ontology

OCCURS_WITH = "occurs-with"


@dataclass
class OwItem:
    kind: str                       # "word" | "prefix" | "subquery"
    word: Optional[str] = None
    node: Optional["QueryNode"] = None


@dataclass
class Arc:
    kind: str                       # "ontology" | "occurs-with"
    relation: Optional[str] = None
    reverse: bool = False
    target: Optional["QueryNode"] = None
    items: List[OwItem] = field(default_factory=list)


@dataclass
class QueryNode:
    kind: str                       # "class" | "instance"
    ref: int                        # class id or entity id
    arcs: List[Arc] = field(default_factory=list)

    def is_class(self) -> bool:
        return self.kind == "class"


@dataclass
class QueryTree:
    root: QueryNode


_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def _tokenize(text: str) -> List[Tuple[str, int]]:
    return [(m.group(0), m.start()) for m in _TOKEN_RE.finditer(text)]


def _lookup_name(raw: str):
    return raw, raw.replace("_", " ")


def parse_query(text: str, ontology: Ontology) -> QueryTree:
    """Parse and type-check one query; raises QueryParseError / UnknownNameError /
    QueryTypingError."""
    tokens = _tokenize(text)
    pos = 0

    def error_at(idx, msg):
        where = tokens[idx][1] if idx < len(tokens) else len(text)
        return QueryParseError(msg, pos=where)

    def parse_node() -> QueryNode:
        nonlocal pos
        if pos >= len(tokens):
            raise error_at(pos, "expected class: or entity: reference")
        tok, _ = tokens[pos]
        if tok.startswith("class:"):
            node = QueryNode(kind="class", ref=_resolve_class(tok[len("class:"):]))
        elif tok.startswith("entity:"):
            node = QueryNode(kind="instance", ref=_resolve_entity(tok[len("entity:"):]))
        else:
            raise error_at(pos, f"expected class: or entity: reference, got {tok!r}")
        pos += 1
        while pos < len(tokens) and tokens[pos][0] == "(":
            node.arcs.append(parse_arc(node))
        return node

    def _resolve_class(raw: str) -> int:
        for cand in _lookup_name(raw):
            cid = ontology.class_id(cand)
            if cid is not None:
                return cid
        raise UnknownNameError(f"unknown class {raw!r}")

    def _resolve_entity(raw: str) -> int:
        for cand in _lookup_name(raw):
            eid = ontology.entity_id(cand)
            if eid is not None:
                return eid
        raise UnknownNameError(f"unknown instance {raw!r}")

    def parse_arc(source: QueryNode) -> Arc:
        nonlocal pos
        pos += 1  # consume "("
        if pos >= len(tokens):
            raise error_at(pos, "expected relation name after '('")
        name, _ = tokens[pos]
        if name in ("(", ")"):
            raise error_at(pos, "expected relation name after '('")
        pos += 1
        if name == OCCURS_WITH:
            items = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                items.append(parse_owitem())
            if not items:
                raise error_at(pos, "occurs-with needs at least one item")
            expect_close()
            return Arc(kind="occurs-with", items=items)
        reverse_marker = name.endswith("~")
        rel_name = name[:-1] if reverse_marker else name
        if rel_name not in ontology.relations:
            raise UnknownNameError(f"unknown relation {rel_name!r}")
        target = parse_node()
        expect_close()
        arc = Arc(kind="ontology", relation=rel_name, target=target)
        arc.reverse = _infer_direction(ontology, source, arc,
                                       force_reverse=reverse_marker)
        return arc

    def parse_owitem() -> OwItem:
        nonlocal pos
        tok, _ = tokens[pos]
        if tok == "(":
            raise error_at(pos, "unexpected '(' inside occurs-with")
        if tok.startswith("class:") or tok.startswith("entity:"):
            return OwItem(kind="subquery", node=parse_node())
        pos += 1
        if tok.endswith("*"):
            prefix = tok[:-1]
            if not prefix:
                raise error_at(pos - 1, "prefix item needs at least one character")
            return OwItem(kind="prefix", word=prefix.lower())
        return OwItem(kind="word", word=tok.lower())

    def expect_close():
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise error_at(pos, "expected ')'")
        pos += 1

    root = parse_node()
    if pos != len(tokens):
        raise error_at(pos, f"trailing input {tokens[pos][0]!r}")
    return QueryTree(root=root)


def _compatible(ontology: Ontology, node: QueryNode, cid: int) -> bool:
    """Node may sit on a relation endpoint typed ``cid`` (ancestry either way)."""
    if node.kind == "instance":
        return ontology.is_instance_of(node.ref, cid)
    related = ontology.ancestors(node.ref) | ontology.descendants(node.ref)
    return cid in related


def _infer_direction(ontology: Ontology, source: QueryNode, arc: Arc,
                     force_reverse: bool = False) -> bool:
    rel = ontology.relations[arc.relation]
    forward_ok = (_compatible(ontology, source, rel.source_class)
                  and _compatible(ontology, arc.target, rel.target_class))
    reverse_ok = (_compatible(ontology, source, rel.target_class)
                  and _compatible(ontology, arc.target, rel.source_class))
    if force_reverse:
        if not reverse_ok:
            raise QueryTypingError(
                f"relation {arc.relation!r} cannot be traversed in reverse here")
        return True
    if forward_ok:
        return False
    if reverse_ok:
        return True
    raise QueryTypingError(
        f"relation {arc.relation!r} does not type-check against its nodes")


def check_types(tree: QueryTree, ontology: Ontology):
    """Re-validate every relation arc of an assembled tree."""

    def visit(node: QueryNode):
        for arc in node.arcs:
            if arc.kind == "ontology":
                inferred = _infer_direction(ontology, node, arc,
                                            force_reverse=arc.reverse)
                if inferred != arc.reverse:
                    raise QueryTypingError(
                        f"relation {arc.relation!r} direction conflicts with its types")
                visit(arc.target)
            else:
                if not arc.items:
                    raise QueryTypingError("occurs-with needs at least one item")
                for it in arc.items:
                    if it.kind == "subquery":
                        visit(it.node)

    visit(tree.root)


def _name_token(name: str) -> str:
    return name.replace(" ", "_")


def to_text(tree: QueryTree, ontology: Ontology) -> str:
    def node_text(node: QueryNode) -> str:
        if node.kind == "class":
            ref = "class:" + _name_token(ontology.class_name(node.ref))
        else:
            ref = "entity:" + _name_token(ontology.entity_name(node.ref))
        parts = [ref]
        for arc in node.arcs:
            if arc.kind == "ontology":
                rel = arc.relation + ("~" if arc.reverse else "")
                parts.append(f"({rel} {node_text(arc.target)})")
            else:
                items = []
                for it in arc.items:
                    if it.kind == "word":
                        items.append(it.word)
                    elif it.kind == "prefix":
                        items.append(it.word + "*")
                    else:
                        items.append(node_text(it.node))
                parts.append(f"({OCCURS_WITH} " + " ".join(items) + ")")
        return " ".join(parts)

    return node_text(tree.root)


def to_json(tree: QueryTree, ontology: Ontology) -> dict:
    def node_json(node: QueryNode) -> dict:
        name = (ontology.class_name(node.ref) if node.kind == "class"
                else ontology.entity_name(node.ref))
        out = {"kind": node.kind, "name": name, "arcs": []}
        for arc in node.arcs:
            if arc.kind == "ontology":
                out["arcs"].append({"kind": "ontology", "relation": arc.relation,
                                    "reverse": arc.reverse,
                                    "target": node_json(arc.target)})
            else:
                items = []
                for it in arc.items:
                    if it.kind == "word":
                        items.append({"word": it.word})
                    elif it.kind == "prefix":
                        items.append({"prefix": it.word})
                    else:
                        items.append({"node": node_json(it.node)})
                out["arcs"].append({"kind": "occurs-with", "items": items})
        return out

    return {"root": node_json(tree.root)}


def from_json(data: dict, ontology: Ontology) -> QueryTree:
    def node_from(d: dict) -> QueryNode:
        kind = d["kind"]
        name = d["name"]
        if kind == "class":
            ref = ontology.class_id(name)
            if ref is None:
                raise UnknownNameError(f"unknown class {name!r}")
        elif kind == "instance":
            ref = ontology.entity_id(name)
            if ref is None:
                raise UnknownNameError(f"unknown instance {name!r}")
        else:
            raise QueryParseError(f"bad node kind {kind!r}")
        node = QueryNode(kind=kind, ref=ref)
        for a in d.get("arcs", []):
            if a["kind"] == "ontology":
                if a["relation"] not in ontology.relations:
                    raise UnknownNameError(f"unknown relation {a['relation']!r}")
                node.arcs.append(Arc(kind="ontology", relation=a["relation"],
                                     reverse=bool(a.get("reverse", False)),
                                     target=node_from(a["target"])))
            else:
                items = []
                for it in a.get("items", []):
                    if "word" in it:
                        items.append(OwItem(kind="word", word=it["word"].lower()))
                    elif "prefix" in it:
                        items.append(OwItem(kind="prefix", word=it["prefix"].lower()))
                    else:
                        items.append(OwItem(kind="subquery", node=node_from(it["node"])))
                node.arcs.append(Arc(kind="occurs-with", items=items))
        return node

    tree = QueryTree(root=node_from(data["root"]))
    check_types(tree, ontology)
    return tree
