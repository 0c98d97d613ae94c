"""Entity recognition and anaphora resolution over one document.

Recognition starts from the corpus link annotations. Later occurrences, within
the same section, of the full name or any contiguous name part of a previously
linked entity are recognized too (longest match wins, the most recently linked
entity breaks ties). Anaphora resolution maps the closed pronoun list to the
last recognized entity of matching gender and recognizes "the <class>" as the
document's title entity when that entity belongs to the class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ..corpus import Document, tokenize
from ..ontology import Ontology

LINK = "link"
NAME_MATCH = "name-match"
PRONOUN = "pronoun"
THE_CLASS = "the-class-pattern"

PRONOUN_GENDER = {
    "he": "male", "him": "male", "his": "male",
    "she": "female", "her": "female", "hers": "female",
    "it": "neuter", "its": "neuter",
}


@dataclass(frozen=True)
class Mention:
    """An entity mention: token span [first, last] of one sentence."""

    section: int
    sentence: int     # document-wide sentence index
    first: int
    last: int
    entity: int
    provenance: str


def recognize_entities(doc: Document, ontology: Ontology) -> List[Mention]:
    """Link mentions plus same-section name-match mentions, in document order."""
    mentions: List[Mention] = []
    for sec_no, section in enumerate(doc.sections):
        # name part (token tuple) -> list of (link order, entity id)
        parts: Dict[Tuple[str, ...], List[Tuple[int, int]]] = {}
        link_order = 0
        sent_offset = _section_sentence_offset(doc, sec_no)
        for local_no, sent in enumerate(section.sentences):
            sent_no = sent_offset + local_no
            links = {l.first_token: l for l in sent.links}
            linked_tokens = set()
            for l in sent.links:
                linked_tokens.update(range(l.first_token, l.last_token + 1))
            max_part = max((len(p) for p in parts), default=0)
            t = 0
            n = len(sent.tokens)
            while t < n:
                link = links.get(t)
                if link is not None:
                    mentions.append(Mention(sec_no, sent_no, link.first_token,
                                            link.last_token, link.entity, LINK))
                    for part in _name_parts(ontology.entity_name(link.entity)):
                        parts.setdefault(part, []).append((link_order, link.entity))
                    link_order += 1
                    max_part = max(max_part, len(tokenize(ontology.entity_name(link.entity))))
                    t = link.last_token + 1
                    continue
                matched = None
                for length in range(min(max_part, n - t), 0, -1):
                    if any(i in linked_tokens for i in range(t, t + length)):
                        continue
                    cands = parts.get(tuple(sent.tokens[t:t + length]))
                    if cands:
                        # most recently linked entity wins the tie
                        matched = (length, max(cands)[1])
                        break
                if matched is not None:
                    length, eid = matched
                    mentions.append(Mention(sec_no, sent_no, t, t + length - 1, eid, NAME_MATCH))
                    t += length
                else:
                    t += 1
    return mentions


def resolve_anaphora(doc: Document, mentions: List[Mention],
                     ontology: Ontology) -> List[Mention]:
    """Add pronoun and "the <class>" mentions; returns the full sorted mention list."""
    title_entity = ontology.entity_id(doc.title)
    class_patterns = _class_name_patterns(ontology)
    out = list(mentions)
    for sec_no, section in enumerate(doc.sections):
        sent_offset = _section_sentence_offset(doc, sec_no)
        section_mentions = sorted(
            (m for m in mentions if m.section == sec_no),
            key=lambda m: (m.sentence, m.first))
        pending = list(section_mentions)
        seen: List[Mention] = []
        for local_no, sent in enumerate(section.sentences):
            sent_no = sent_offset + local_no
            covered = set()
            for m in section_mentions:
                if m.sentence == sent_no:
                    covered.update(range(m.first, m.last + 1))
            t = 0
            n = len(sent.tokens)
            while t < n:
                while pending and (pending[0].sentence, pending[0].first) <= (sent_no, t):
                    seen.append(pending.pop(0))
                if t in covered:
                    t += 1
                    continue
                tok = sent.tokens[t].lower()
                new = None
                if tok == "the" and title_entity is not None:
                    span = _match_the_class(sent.tokens, t, covered, class_patterns,
                                            title_entity, ontology)
                    if span is not None:
                        new = Mention(sec_no, sent_no, span[0], span[1],
                                      title_entity, THE_CLASS)
                if new is None and tok in PRONOUN_GENDER:
                    ante = _last_of_gender(seen, PRONOUN_GENDER[tok], ontology)
                    if ante is not None:
                        new = Mention(sec_no, sent_no, t, t, ante, PRONOUN)
                if new is not None:
                    out.append(new)
                    seen.append(new)
                    covered.update(range(new.first, new.last + 1))
                    t = new.last + 1
                else:
                    t += 1
    out.sort(key=lambda m: (m.sentence, m.first))
    return out


def _section_sentence_offset(doc: Document, sec_no: int) -> int:
    return sum(len(s.sentences) for s in doc.sections[:sec_no])


def _name_parts(name: str) -> List[Tuple[str, ...]]:
    toks = tokenize(name)
    parts = []
    for i in range(len(toks)):
        for j in range(i + 1, len(toks) + 1):
            parts.append(tuple(toks[i:j]))
    return parts


def _class_name_patterns(ontology: Ontology) -> List[Tuple[Tuple[str, ...], int]]:
    pats = []
    for cid, name in enumerate(ontology.class_names):
        toks = tuple(t.lower() for t in tokenize(name.replace("_", " ")))
        if toks:
            pats.append((toks, cid))
    pats.sort(key=lambda p: -len(p[0]))
    return pats


def _match_the_class(tokens, t, covered, class_patterns, title_entity,
                     ontology: Ontology) -> Optional[Tuple[int, int]]:
    """Span (first, last) of a "the <class>" pattern starting at token ``t``."""
    for pat, cid in class_patterns:
        last = t + len(pat)
        if last >= len(tokens):
            continue
        window = tuple(tok.lower() for tok in tokens[t + 1:last + 1])
        if window != pat:
            continue
        if any(i in covered for i in range(t, last + 1)):
            continue
        if ontology.is_instance_of(title_entity, cid):
            return (t, last)
    return None


def _last_of_gender(seen: List[Mention], gender: str, ontology: Ontology) -> Optional[int]:
    for m in reversed(seen):
        if ontology.gender(m.entity) == gender:
            return m.entity
    return None
