"""The Context type: the unit of co-occurrence the whole engine works on."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class ContextItem:
    """One positioned item of a context: either a word or an entity reference.

    ``position`` is 1-based and strictly increasing within a context.
    ``source_tokens`` are the token indices in the source sentence this item
    covers (used for excerpt highlighting; empty for synthetic contexts).
    """

    position: int
    word: Optional[str] = None
    entity: Optional[int] = None
    source_tokens: tuple = ()

    def is_entity(self) -> bool:
        return self.entity is not None


@dataclass
class ContextSource:
    """Excerpt backing for a context: the original text plus active char spans."""

    text: str
    title: str = ""
    doc_id: str = ""
    active: List[tuple] = field(default_factory=list)


@dataclass
class Context:
    cid: int
    doc: int
    sentence: int
    items: List[ContextItem] = field(default_factory=list)
    source: Optional[ContextSource] = None

    def words(self) -> List[str]:
        return [it.word for it in self.items if it.word is not None]

    def entities(self) -> List[int]:
        return [it.entity for it in self.items if it.entity is not None]

    def source_token_indices(self) -> List[int]:
        out: List[int] = []
        for it in self.items:
            out.extend(it.source_tokens)
        return out

    def check(self):
        last = 0
        for it in self.items:
            assert it.position > last, "context positions must be strictly increasing"
            assert (it.word is None) != (it.entity is None), "item is either word or entity"
            last = it.position


def make_context(cid: int, doc: int, sentence: int, words_and_entities) -> Context:
    """Build a context from a sequence of ``str`` (word) or ``int`` (entity id) items."""
    items = []
    for pos, x in enumerate(words_and_entities, start=1):
        if isinstance(x, str):
            items.append(ContextItem(position=pos, word=x))
        else:
            items.append(ContextItem(position=pos, entity=int(x)))
    return Context(cid=cid, doc=doc, sentence=sentence, items=items)
