import json

import pytest

from contextsearch.corpus import is_punctuation, load_corpus, tokenize
from contextsearch.errors import CorpusError


def write_docs(tmp_path, docs, name="c.jsonl"):
    p = tmp_path / name
    with open(p, "w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(json.dumps(d) + "\n")
    return p


def doc(sentences, doc_id="d1", title="T"):
    return {"id": doc_id, "title": title,
            "sections": [{"heading": "", "sentences": sentences}]}


def sentence(text, links=None, parse=None):
    return {"text": text, "tokens": tokenize(text), "parse": parse,
            "links": links or []}


def test_tokenize_splits_punctuation():
    assert tokenize("however, its leaves are toxic.") == \
        ["however", ",", "its", "leaves", "are", "toxic", "."]
    assert is_punctuation(",") and not is_punctuation("leaves")


def test_single_document_no_links(tmp_path, ontology):
    p = write_docs(tmp_path, [doc([sentence("Oak trees grow slowly.")])])
    corpus = load_corpus(p, ontology)
    assert len(corpus.documents) == 1
    assert corpus.warnings == []
    sent = corpus.documents[0].sections[0].sentences[0]
    assert sent.links == [] and not sent.parsed


def test_rhubarb_link_resolves(corpus, ontology):
    sent = corpus.documents[0].sections[0].sentences[0]
    assert len(sent.links) == 1
    assert sent.links[0].entity == ontology.entity_id("Rhubarb")
    assert sent.tokens[sent.links[0].first_token] == "rhubarb"


def test_unknown_entity_link_dropped_with_warning(tmp_path, ontology):
    d = doc([sentence("Something here.",
                      links=[{"first_token": 0, "last_token": 0, "entity": "NoSuch"}])])
    corpus = load_corpus(write_docs(tmp_path, [d]), ontology)
    assert len(corpus.warnings) == 1
    assert corpus.documents[0].sections[0].sentences[0].links == []


def test_overlapping_link_rejected_with_warning(tmp_path, ontology):
    d = doc([sentence("Albert Einstein lectured.",
                      links=[{"first_token": 0, "last_token": 1, "entity": "Albert Einstein"},
                             {"first_token": 1, "last_token": 1, "entity": "Europe"}])])
    corpus = load_corpus(write_docs(tmp_path, [d]), ontology)
    assert len(corpus.warnings) == 1
    sent = corpus.documents[0].sections[0].sentences[0]
    assert len(sent.links) == 1
    assert sent.links[0].last_token == 1


def test_out_of_range_span_is_an_error(tmp_path, ontology):
    d = doc([sentence("Tiny.", links=[{"first_token": 0, "last_token": 9, "entity": "Europe"}])])
    with pytest.raises(CorpusError, match="out of range"):
        load_corpus(write_docs(tmp_path, [d]), ontology)


def test_malformed_json_reports_line(tmp_path, ontology):
    p = tmp_path / "bad.jsonl"
    p.write_text('{"id": "a", "sections": []}\nnot json\n', encoding="utf-8")
    with pytest.raises(CorpusError, match="line 2"):
        load_corpus(p, ontology)


def test_token_offsets_align(corpus):
    sent = corpus.documents[0].sections[0].sentences[0]
    for tok, (a, b) in zip(sent.tokens, sent.token_offsets):
        assert sent.text[a:b] == tok
