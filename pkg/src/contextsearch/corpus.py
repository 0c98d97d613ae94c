"""Corpus loading: JSON-lines documents with sections, sentences, parses and entity links."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import CorpusError
from .ontology import Ontology

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def tokenize(text: str) -> List[str]:
    """Whitespace + punctuation splitting, case preserving."""
    return _TOKEN_RE.findall(text)


def is_punctuation(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


@dataclass
class Link:
    first_token: int
    last_token: int
    entity: int


@dataclass
class Sentence:
    text: str
    tokens: List[str]
    parse: Optional[str]
    links: List[Link] = field(default_factory=list)
    token_offsets: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def parsed(self) -> bool:
        return self.parse is not None


@dataclass
class Section:
    heading: str
    sentences: List[Sentence] = field(default_factory=list)


@dataclass
class Document:
    index: int
    doc_id: str
    title: str
    sections: List[Section] = field(default_factory=list)

    def sentences(self):
        """Yield (section_index, sentence_index_in_doc, sentence)."""
        sent_no = 0
        for sec_no, sec in enumerate(self.sections):
            for sent in sec.sentences:
                yield sec_no, sent_no, sent
                sent_no += 1


@dataclass
class Corpus:
    documents: List[Document] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


def _token_offsets(text: str, tokens: List[str]) -> List[Tuple[int, int]]:
    """Character span of each token in ``text``; (-1, -1) when not alignable."""
    out = []
    cursor = 0
    for tok in tokens:
        idx = text.find(tok, cursor)
        if idx < 0:
            out.append((-1, -1))
        else:
            out.append((idx, idx + len(tok)))
            cursor = idx + len(tok)
    return out


def load_corpus(path, ontology: Ontology) -> Corpus:
    """Load JSON-lines documents; spans validated, unknown link targets dropped with a warning.

    Record shape per line:
        {"id", "title", "sections": [{"heading", "sentences": [
            {"text", "tokens": [...], "parse": str|null,
             "links": [{"first_token", "last_token", "entity"}]}]}]}
    """
    corpus = Corpus()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"invalid JSON: {exc}", line=lineno)
            doc = _parse_document(rec, len(corpus.documents), lineno, ontology, corpus.warnings)
            corpus.documents.append(doc)
    return corpus


def _parse_document(rec, index, lineno, ontology, warnings) -> Document:
    if not isinstance(rec, dict) or "id" not in rec or "sections" not in rec:
        raise CorpusError("document record needs 'id' and 'sections'", line=lineno)
    doc = Document(index=index, doc_id=str(rec["id"]), title=str(rec.get("title", "")))
    for sec_rec in rec["sections"]:
        section = Section(heading=str(sec_rec.get("heading", "")))
        for sent_rec in sec_rec.get("sentences", []):
            text = sent_rec.get("text", "")
            tokens = sent_rec.get("tokens")
            if tokens is None:
                tokens = tokenize(text)
            tokens = [str(t) for t in tokens]
            sent = Sentence(
                text=text,
                tokens=tokens,
                parse=sent_rec.get("parse"),
                token_offsets=_token_offsets(text, tokens),
            )
            taken = [False] * len(tokens)
            for link_rec in sent_rec.get("links", []):
                first, last = int(link_rec["first_token"]), int(link_rec["last_token"])
                if not (0 <= first <= last < len(tokens)):
                    raise CorpusError(
                        f"link span [{first}, {last}] out of range for {len(tokens)} tokens",
                        line=lineno)
                name = link_rec["entity"]
                eid = ontology.entity_id(name)
                if eid is None:
                    warnings.append(f"doc {doc.doc_id}: unknown entity {name!r} in link, dropped")
                    continue
                if any(taken[first:last + 1]):
                    warnings.append(
                        f"doc {doc.doc_id}: link span [{first}, {last}] overlaps an earlier link, dropped")
                    continue
                for i in range(first, last + 1):
                    taken[i] = True
                sent.links.append(Link(first_token=first, last_token=last, entity=eid))
            sent.links.sort(key=lambda l: l.first_token)
            section.sentences.append(sent)
        doc.sections.append(section)
    return doc
