"""Reader for bracketed constituent parse strings (Penn-Treebank style)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from ..errors import BracketParseError


@dataclass
class ParseNode:
    tag: str
    children: List["ParseNode"] = field(default_factory=list)
    token: Optional[str] = None
    first_token: int = -1   # leaf index range [first_token, last_token)
    last_token: int = -1

    @property
    def is_terminal(self) -> bool:
        return self.token is not None

    def leaves(self) -> List["ParseNode"]:
        if self.is_terminal:
            return [self]
        out = []
        for ch in self.children:
            out.extend(ch.leaves())
        return out

    def leaf_tokens(self) -> List[str]:
        return [l.token for l in self.leaves()]


def parse_brackets(text: str) -> ParseNode:
    """Parse one bracketed tree; raises BracketParseError with a character position."""
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def parse_node() -> ParseNode:
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != "(":
            raise BracketParseError("expected '('", pos=pos)
        pos += 1
        skip_ws()
        start = pos
        while pos < n and not text[pos].isspace() and text[pos] not in "()":
            pos += 1
        tag = text[start:pos]
        if not tag:
            raise BracketParseError("empty node tag", pos=start)
        node = ParseNode(tag=tag)
        skip_ws()
        if pos < n and text[pos] == "(":
            while True:
                skip_ws()
                if pos < n and text[pos] == ")":
                    break
                node.children.append(parse_node())
        else:
            start = pos
            while pos < n and not text[pos].isspace() and text[pos] != ")":
                pos += 1
            token = text[start:pos]
            if not token:
                raise BracketParseError(f"terminal {tag!r} has no token", pos=start)
            node.token = _unescape(token)
            skip_ws()
        if pos >= n or text[pos] != ")":
            raise BracketParseError("expected ')'", pos=pos)
        pos += 1
        return node

    root = parse_node()
    skip_ws()
    if pos != n:
        raise BracketParseError("trailing characters after tree", pos=pos)
    _number_leaves(root, 0)
    return root


def _unescape(token: str) -> str:
    return {
        "-LRB-": "(", "-RRB-": ")", "-LSB-": "[", "-RSB-": "]",
        "-LCB-": "{", "-RCB-": "}",
    }.get(token, token)


def _number_leaves(node: ParseNode, next_index: int) -> int:
    if node.is_terminal:
        node.first_token = next_index
        node.last_token = next_index + 1
        return next_index + 1
    node.first_token = next_index
    for ch in node.children:
        next_index = _number_leaves(ch, next_index)
    node.last_token = next_index
    return next_index
