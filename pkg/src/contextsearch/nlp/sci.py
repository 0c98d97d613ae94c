"""Constituent identification: turn a parse tree into a tree of ENUM / SUB / CONC / LEAF nodes.

The rules, applied per node:

* enumeration: children (ignoring punctuation and conjunctions) all NP, all VP,
  or all clauses -> ENUM; the ignored tokens become separator leaves that stay
  in the tree but are skipped during recombination
* sub-clause: every SBAR -> SUB, headed by the nearest NP sibling on the left
  when its first word is on the head-trigger list, headless otherwise
* sub-clause: a PP whose first word is on the preposition list, or any PP at
  the start of the sentence -> headless SUB
* appositive: an NP directly followed by "," NP ("," | end) with no conjunction
  among the siblings -> the second NP becomes a SUB headed by the first
* everything else -> CONC; subtrees containing only text are contracted into a
  single LEAF

Leaf spans (separators included) always partition the sentence token sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ..corpus import is_punctuation
from .brackets import ParseNode

ENUM = "ENUM"
SUB = "SUB"
CONC = "CONC"
LEAF = "LEAF"

CLAUSE_TAGS = {"S", "SINV", "SQ"}

DEFAULT_SUB_HEAD_WORDS = ("which", "who", "whom", "whose", "that")
DEFAULT_SUB_PREPOSITIONS = ("before", "after", "while", "during",
                            "although", "though", "because", "since")
DEFAULT_CONJUNCTIONS = ("and", "or", "but", "nor", "&")


@dataclass
class SciConfig:
    sub_head_words: Tuple[str, ...] = DEFAULT_SUB_HEAD_WORDS
    sub_prepositions: Tuple[str, ...] = DEFAULT_SUB_PREPOSITIONS
    conjunctions: Tuple[str, ...] = DEFAULT_CONJUNCTIONS


@dataclass
class SciNode:
    kind: str
    children: List["SciNode"] = field(default_factory=list)
    start: int = -1             # LEAF token range [start, end)
    end: int = -1
    head: Optional[Tuple[int, int]] = None   # SUB only
    separator: bool = False     # punctuation/conjunction leaf, skipped by SCR

    def leaves(self) -> List["SciNode"]:
        if self.kind == LEAF:
            return [self]
        out = []
        for ch in self.children:
            out.extend(ch.leaves())
        return out

    def span(self) -> Tuple[int, int]:
        ls = self.leaves()
        return (ls[0].start, ls[-1].end) if ls else (-1, -1)


def _base_tag(tag: str) -> str:
    return tag.split("-")[0].split("=")[0]


def _is_separator_terminal(node: ParseNode, cfg: SciConfig) -> bool:
    if not node.is_terminal:
        return False
    if node.tag == "CC" or node.token.lower() in cfg.conjunctions:
        return True
    return is_punctuation(node.token)


def build_sci_tree(parse: ParseNode, config: Optional[SciConfig] = None) -> SciNode:
    cfg = config or SciConfig()
    tree = _build(parse, None, -1, cfg)
    tree = _contract(tree)
    _mark_separators(tree, parse, cfg)
    _check_partition(tree, parse)
    return tree


def _first_word(node: ParseNode) -> str:
    leaves = node.leaves()
    return leaves[0].token.lower() if leaves else ""


def _sub_trigger(node: ParseNode, siblings: Optional[Sequence[ParseNode]],
                 index: int, cfg: SciConfig) -> Optional[Tuple[bool, Optional[Tuple[int, int]]]]:
    """(is_sub, head_span) when the node's own label makes it a SUB."""
    base = _base_tag(node.tag)
    if base == "SBAR":
        head = None
        if _first_word(node) in cfg.sub_head_words and siblings is not None:
            for j in range(index - 1, -1, -1):
                if _base_tag(siblings[j].tag) == "NP":
                    head = (siblings[j].first_token, siblings[j].last_token)
                    break
        return True, head
    if base == "PP":
        if _first_word(node) in cfg.sub_prepositions or node.first_token == 0:
            return True, None
    return None


def _appositive_index(children: Sequence[ParseNode], cfg: SciConfig) -> Optional[int]:
    """Index of an appositive NP child, or None.

    Pattern: NP , NP followed by punctuation or the end, with no conjunction
    among the children (a conjunction signals a real enumeration instead).
    """
    for ch in children:
        if ch.is_terminal and (ch.tag == "CC" or ch.token.lower() in cfg.conjunctions):
            return None
    for i in range(len(children) - 2):
        a, comma, b = children[i], children[i + 1], children[i + 2]
        if (_base_tag(a.tag) == "NP" and _base_tag(b.tag) == "NP"
                and comma.is_terminal and comma.token == ","):
            if i + 3 >= len(children) or _is_separator_terminal(children[i + 3], cfg):
                return i + 2
    return None


def _enum_kind(children: Sequence[ParseNode], cfg: SciConfig) -> bool:
    content = [ch for ch in children if not _is_separator_terminal(ch, cfg)]
    if len(content) < 2 or any(ch.is_terminal for ch in content):
        return False
    tags = [_base_tag(ch.tag) for ch in content]
    return (all(t == "NP" for t in tags)
            or all(t == "VP" for t in tags)
            or all(t in CLAUSE_TAGS for t in tags))


def _build(node: ParseNode, siblings, index: int, cfg: SciConfig,
           force_no_sub: bool = False) -> SciNode:
    if node.is_terminal:
        return SciNode(kind=LEAF, start=node.first_token, end=node.last_token)

    if not force_no_sub:
        trig = _sub_trigger(node, siblings, index, cfg)
        if trig is not None:
            _, head = trig
            content = _build(node, siblings, index, cfg, force_no_sub=True)
            return SciNode(kind=SUB, children=[content], head=head)

    appos = _appositive_index(node.children, cfg)
    kind = CONC
    if appos is None and _enum_kind(node.children, cfg):
        kind = ENUM

    out = SciNode(kind=kind)
    for i, ch in enumerate(node.children):
        built = _build(ch, node.children, i, cfg)
        if appos is not None and i == appos and built.kind != SUB:
            head_node = node.children[appos - 2]
            built = SciNode(kind=SUB, children=[built],
                            head=(head_node.first_token, head_node.last_token))
        out.children.append(built)
    return out


def _pure_text(node: SciNode) -> bool:
    if node.kind == LEAF:
        return True
    if node.kind in (SUB, ENUM):
        return False
    return all(_pure_text(ch) for ch in node.children)


def _contract(node: SciNode) -> SciNode:
    if node.kind == LEAF:
        return node
    if node.kind == CONC and _pure_text(node):
        start, end = node.span()
        return SciNode(kind=LEAF, start=start, end=end)
    node.children = [_contract(ch) for ch in node.children]
    return node


def _mark_separators(node: SciNode, parse: ParseNode, cfg: SciConfig):
    tokens = parse.leaf_tokens()
    for leaf in node.leaves():
        toks = tokens[leaf.start:leaf.end]
        if toks and all(is_punctuation(t) or t.lower() in cfg.conjunctions for t in toks):
            leaf.separator = True


def _check_partition(node: SciNode, parse: ParseNode):
    leaves = node.leaves()
    cursor = parse.first_token
    for leaf in leaves:
        assert leaf.start == cursor, "SCI leaves must partition the sentence"
        cursor = leaf.end
    assert cursor == parse.last_token, "SCI leaves must cover the sentence"
