"""Excerpt store: context id -> original sentence with active character spans."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..contexts import Context
from ..errors import UnknownContextError
from ..ontology import Ontology


@dataclass
class Excerpt:
    cid: int
    doc: str
    title: str
    text: str
    active: List[Tuple[int, int]]

    def to_json(self) -> dict:
        return {"cid": self.cid, "doc": self.doc, "title": self.title,
                "text": self.text, "active": [list(s) for s in self.active]}


@dataclass
class ExcerptStore:
    records: Dict[int, Excerpt] = field(default_factory=dict)

    def get(self, cid: int) -> Excerpt:
        rec = self.records.get(cid)
        if rec is None:
            raise UnknownContextError(f"no excerpt for context id {cid}")
        return rec

    def __len__(self) -> int:
        return len(self.records)


def build_excerpt(ctx: Context, ontology: Ontology) -> Excerpt:
    if ctx.source is not None:
        return Excerpt(cid=ctx.cid, doc=ctx.source.doc_id, title=ctx.source.title,
                       text=ctx.source.text,
                       active=[tuple(s) for s in ctx.source.active])
    # synthetic context: render items as the text, everything active
    parts = []
    for it in ctx.items:
        parts.append(it.word if it.word is not None else ontology.entity_name(it.entity))
    text = " ".join(parts)
    return Excerpt(cid=ctx.cid, doc=str(ctx.doc), title="", text=text,
                   active=[(0, len(text))])
