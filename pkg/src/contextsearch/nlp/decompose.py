"""Document decomposition: sentences -> contexts, in three granularities.

Mode ``contexts`` runs entity recognition, anaphora resolution and the
SCI + SCR transformation per sentence (sentences without a usable parse fall
back to one whole-sentence context). Modes ``sentences`` and ``sections`` take
each sentence / section as a single context. Entity mentions become entity
items at their token positions in every mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from ..contexts import Context, ContextItem, ContextSource
from ..corpus import Corpus, Document, Sentence, is_punctuation
from ..errors import BracketParseError
from ..ontology import Ontology
from .brackets import parse_brackets
from .mentions import Mention, recognize_entities, resolve_anaphora
from .sci import SciConfig, build_sci_tree
from .scr import recombine

MODES = ("contexts", "sentences", "sections")


@dataclass
class DecomposeConfig:
    sci: SciConfig = field(default_factory=SciConfig)
    merge_list_items: bool = False
    list_item_markers: Tuple[str, ...] = ("*", "-", "•")

    @classmethod
    def from_json(cls, path) -> "DecomposeConfig":
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        sci_kwargs = {k: tuple(v) for k, v in raw.get("sci", {}).items()}
        return cls(sci=SciConfig(**sci_kwargs),
                   merge_list_items=bool(raw.get("merge_list_items", False)),
                   list_item_markers=tuple(raw.get("list_item_markers", ("*", "-", "•"))))


def decompose(corpus: Corpus, ontology: Ontology, mode: str = "contexts",
              config: Optional[DecomposeConfig] = None) -> List[Context]:
    """Decompose every document; context ids are dense in stable document order."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    cfg = config or DecomposeConfig()
    out: List[Context] = []
    for doc in corpus.documents:
        out.extend(decompose_document(doc, ontology, mode, cfg, next_cid=len(out)))
    return out


def decompose_document(doc: Document, ontology: Ontology, mode: str,
                       cfg: DecomposeConfig, next_cid: int) -> List[Context]:
    doc = _merge_list_items(doc, cfg) if cfg.merge_list_items else doc
    mentions = recognize_entities(doc, ontology)
    mentions = resolve_anaphora(doc, mentions, ontology)
    by_sentence: Dict[int, List[Mention]] = {}
    for m in mentions:
        by_sentence.setdefault(m.sentence, []).append(m)

    contexts: List[Context] = []
    if mode == "sections":
        for sec_no, section in enumerate(doc.sections):
            if not section.sentences:
                continue
            first_sent = sum(len(s.sentences) for s in doc.sections[:sec_no])
            contexts.append(_section_context(doc, section, first_sent, by_sentence,
                                             next_cid + len(contexts)))
        return contexts

    for sec_no, sent_no, sent in doc.sentences():
        sentence_mentions = by_sentence.get(sent_no, [])
        if mode == "sentences":
            sequences = [list(range(len(sent.tokens)))]
        else:
            sequences = _context_sequences(sent, cfg)
        for seq in sequences:
            ctx = _build_context(doc, sent, sent_no, seq, sentence_mentions,
                                 next_cid + len(contexts))
            if ctx.items:
                contexts.append(ctx)
    return contexts


def _context_sequences(sent: Sentence, cfg: DecomposeConfig) -> List[List[int]]:
    whole = [list(range(len(sent.tokens)))]
    if not sent.parsed:
        return whole
    tree = parse_brackets(sent.parse)
    if tree.leaf_tokens() != sent.tokens:
        # parse does not align with the token sequence: treat as unparsed
        return whole
    sci = build_sci_tree(tree, cfg.sci)
    return recombine(sci)


def _build_context(doc: Document, sent: Sentence, sent_no: int, seq: List[int],
                   mentions: List[Mention], cid: int) -> Context:
    span_start: Dict[int, Mention] = {}
    in_span: Dict[int, Mention] = {}
    for m in mentions:
        span_start[m.first] = m
        for i in range(m.first, m.last + 1):
            in_span[i] = m

    items: List[ContextItem] = []
    seq_set = set(seq)
    pos = 0
    for tok_idx in seq:
        m = in_span.get(tok_idx)
        if m is None:
            pos += 1
            items.append(ContextItem(position=pos, word=sent.tokens[tok_idx],
                                     source_tokens=(tok_idx,)))
        elif tok_idx == m.first:
            pos += 1
            span = tuple(i for i in range(m.first, m.last + 1) if i in seq_set)
            items.append(ContextItem(position=pos, entity=m.entity, source_tokens=span))
        # continuation tokens of a mention are swallowed

    source = ContextSource(
        text=sent.text, title=doc.title, doc_id=doc.doc_id,
        active=_char_spans(sent, [i for it in items for i in it.source_tokens]))
    return Context(cid=cid, doc=doc.index, sentence=sent_no, items=items, source=source)


def _section_context(doc: Document, section, first_sent: int,
                     by_sentence: Dict[int, List[Mention]], cid: int) -> Context:
    items: List[ContextItem] = []
    texts: List[str] = []
    pos = 0
    for off, sent in enumerate(section.sentences):
        sent_no = first_sent + off
        texts.append(sent.text)
        span_map: Dict[int, Mention] = {}
        for m in by_sentence.get(sent_no, []):
            for i in range(m.first, m.last + 1):
                span_map[i] = m
        for tok_idx, tok in enumerate(sent.tokens):
            m = span_map.get(tok_idx)
            if m is None:
                pos += 1
                items.append(ContextItem(position=pos, word=tok))
            elif tok_idx == m.first:
                pos += 1
                items.append(ContextItem(position=pos, entity=m.entity))
    text = " ".join(texts)
    source = ContextSource(text=text, title=doc.title, doc_id=doc.doc_id,
                           active=[(0, len(text))])
    return Context(cid=cid, doc=doc.index, sentence=first_sent, items=items, source=source)


def _char_spans(sent: Sentence, token_indices: List[int]) -> List[Tuple[int, int]]:
    """Character spans for runs of consecutive token indices."""
    if not token_indices or not sent.token_offsets:
        return [(0, len(sent.text))]
    idx = sorted(set(token_indices))
    runs: List[Tuple[int, int]] = []
    run_start = prev = idx[0]
    for i in idx[1:]:
        if i != prev + 1:
            runs.append((run_start, prev))
            run_start = i
        prev = i
    runs.append((run_start, prev))
    spans = []
    for a, b in runs:
        ca = sent.token_offsets[a][0]
        cb = sent.token_offsets[b][1]
        if ca < 0 or cb < 0:
            return [(0, len(sent.text))]
        spans.append((ca, cb))
    return spans


def _merge_list_items(doc: Document, cfg: DecomposeConfig) -> Document:
    """Append bullet-marker sentences to their preceding sentence (opt-in)."""
    new_doc = replace(doc, sections=[])
    for section in doc.sections:
        new_section = replace(section, sentences=[])
        for sent in section.sentences:
            first = sent.tokens[0] if sent.tokens else ""
            if new_section.sentences and first in cfg.list_item_markers:
                prev = new_section.sentences[-1]
                merged_tokens = prev.tokens + sent.tokens[1:]
                merged_text = prev.text + " " + " ".join(sent.tokens[1:])
                merged = Sentence(text=merged_text, tokens=merged_tokens, parse=None,
                                  links=prev.links + [
                                      replace(l,
                                              first_token=l.first_token + len(prev.tokens) - 1,
                                              last_token=l.last_token + len(prev.tokens) - 1)
                                      for l in sent.links],
                                  token_offsets=[])
                new_section.sentences[-1] = merged
            else:
                new_section.sentences.append(sent)
        new_doc.sections.append(new_section)
    return new_doc
