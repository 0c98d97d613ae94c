import random

import numpy as np
import pytest

from contextsearch.contexts import make_context
from contextsearch.errors import (FocusPathError, QueryParseError,
                                  QueryTypingError, UnknownNameError)
from contextsearch.index import build_index
from contextsearch.nlp import decompose
from contextsearch.query import (EvalConfig, QueryTree, apply_suggestion,
                                 change_root, check_types, evaluate, from_json,
                                 parse_query, rank_results, suggest, to_json,
                                 to_text)

from naive import (naive_evaluate, random_contexts, random_ontology,
                   random_query)


@pytest.fixture(scope="module")
def fixture_index(corpus, ontology):
    return build_index(decompose(corpus, ontology, "contexts"), ontology)


FIG1_QUERY = "class:Plant (native-to entity:Europe) (occurs-with edible leav*)"


# -- grammar ------------------------------------------------------------------

def test_parse_figure_one_query(ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    root = tree.root
    assert root.kind == "class" and root.ref == ontology.class_id("Plant")
    assert [a.kind for a in root.arcs] == ["ontology", "occurs-with"]
    assert root.arcs[0].relation == "native-to" and not root.arcs[0].reverse
    assert root.arcs[0].target.ref == ontology.entity_id("Europe")
    items = root.arcs[1].items
    assert [(i.kind, i.word) for i in items] == [("word", "edible"), ("prefix", "leav")]


def test_parse_single_node(ontology):
    tree = parse_query("entity:Broccoli", ontology)
    assert tree.root.kind == "instance"
    assert tree.root.arcs == []


def test_parse_nested_tree(ontology):
    tree = parse_query(
        "class:Plant (native-to class:Location (occurs-with equator))", ontology)
    child = tree.root.arcs[0].target
    assert child.kind == "class" and child.ref == ontology.class_id("Location")
    assert child.arcs[0].kind == "occurs-with"


def test_parse_errors(ontology):
    with pytest.raises(QueryParseError) as exc:
        parse_query("class:Plant (native-to", ontology)
    assert exc.value.pos is not None
    with pytest.raises(UnknownNameError):
        parse_query("class:Animal", ontology)
    with pytest.raises(UnknownNameError):
        parse_query("entity:Nothing", ontology)
    with pytest.raises(UnknownNameError):
        parse_query("class:Plant (no-rel entity:Europe)", ontology)
    with pytest.raises(QueryParseError):
        parse_query("class:Plant (occurs-with)", ontology)


def test_typing_violation(ontology):
    # native-to relates Plant and Location; Person fits neither side
    with pytest.raises(QueryTypingError):
        parse_query("class:Person (native-to class:Person)", ontology)


def test_underscore_names(ontology):
    tree = parse_query("entity:Albert_Einstein", ontology)
    assert tree.root.ref == ontology.entity_id("Albert Einstein")
    assert "entity:Albert_Einstein" in to_text(tree, ontology)


def test_text_round_trip(ontology):
    for q in [FIG1_QUERY, "entity:Broccoli",
              "class:Plant (native-to class:Location (occurs-with equator riv*))"]:
        tree = parse_query(q, ontology)
        again = parse_query(to_text(tree, ontology), ontology)
        assert to_text(again, ontology) == to_text(tree, ontology)


def test_json_round_trip(ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    data = to_json(tree, ontology)
    again = from_json(data, ontology)
    assert to_json(again, ontology) == data


# -- evaluate -----------------------------------------------------------------

def test_single_instance_query(fixture_index, ontology):
    rs = evaluate(parse_query("entity:Broccoli", ontology), fixture_index)
    assert [g.entity for g in rs.groups] == [ontology.entity_id("Broccoli")]


def test_figure_one_query_contexts_vs_sentences(corpus, ontology, fixture_index):
    tree = parse_query(FIG1_QUERY, ontology)
    rs = evaluate(tree, fixture_index)
    names = [ontology.entity_name(g.entity) for g in rs.groups]
    assert names == ["Broccoli"]

    sentence_index = build_index(decompose(corpus, ontology, "sentences"), ontology)
    rs2 = evaluate(tree, sentence_index)
    names2 = {ontology.entity_name(g.entity) for g in rs2.groups}
    assert names2 == {"Broccoli", "Rhubarb"}


def test_pure_ontology_query_matches_fact_scan(fixture_index, ontology):
    rs = evaluate(parse_query("class:Plant (native-to entity:Europe)", ontology),
                  fixture_index)
    europe = ontology.entity_id("Europe")
    rel = ontology.relations["native-to"]
    expect = {int(s) for s, o in zip(rel.subjects, rel.objects) if int(o) == europe}
    assert {g.entity for g in rs.groups} == expect


def test_evidence_carries_contexts_and_facts(fixture_index, ontology):
    rs = evaluate(parse_query(FIG1_QUERY, ontology), fixture_index)
    g = rs.groups[0]
    kinds = {e.kind for e in g.evidence}
    assert kinds == {"fact", "context"}
    fact_ev = [e for e in g.evidence if e.kind == "fact"][0]
    assert fact_ev.fact == (g.entity, "native-to", ontology.entity_id("Europe"))
    ctx_ev = [e for e in g.evidence if e.kind == "context"][0]
    assert fixture_index.excerpt(ctx_ev.cid) is not None


def test_occurs_with_subquery_only(ontology):
    # contexts where a Plant co-occurs with Europe, no word items at all
    rid = ontology.entity_id("Rhubarb")
    eur = ontology.entity_id("Europe")
    contexts = [
        make_context(0, 0, 0, ["grown", "across", eur, "by", rid]),
        make_context(1, 0, 1, ["unrelated", "words", rid]),
    ]
    idx = build_index(contexts, ontology)
    rs = evaluate(parse_query("class:Plant (occurs-with entity:Europe)", ontology), idx)
    assert [g.entity for g in rs.groups] == [rid]


def test_ranking_scores():
    # 3 witnessing contexts with 2 matched words each -> score 6
    from conftest import ONTOLOGY_TSV
    import tempfile, os
    from contextsearch.ontology import load_ontology

    with tempfile.TemporaryDirectory() as d:
        p = os.path.join(d, "o.tsv")
        with open(p, "w") as fh:
            fh.write(ONTOLOGY_TSV)
        onto = load_ontology(p)
    rid = onto.entity_id("Rhubarb")
    contexts = [make_context(i, 0, i, ["tasty", "roots", rid]) for i in range(3)]
    idx = build_index(contexts, onto)
    rs = evaluate(parse_query("class:Plant (occurs-with tasty roots)", onto), idx)
    assert rs.groups[0].entity == rid
    assert rs.groups[0].score == 6

    # a single witnessing fact and no text arcs -> score 1
    rs2 = evaluate(parse_query("entity:Broccoli (cultivated-in entity:Europe)", onto), idx)
    assert rs2.groups[0].score == 1


def test_rank_ties_by_entity_id(ontology):
    matches = [(5, 2, []), (3, 2, []), (4, 7, [])]
    rs = rank_results(matches, ontology)
    assert [g.entity for g in rs.groups] == [4, 3, 5]


def test_broccoli_first_flag(corpus, ontology):
    idx = build_index(decompose(corpus, ontology, "sentences"), ontology)
    tree = parse_query("class:Plant (occurs-with leav*)", ontology)
    plain = evaluate(tree, idx)
    flagged = evaluate(tree, idx, EvalConfig(rank_broccoli_first=True))
    broccoli = ontology.entity_id("Broccoli")
    assert flagged.groups[0].entity == broccoli
    assert {g.entity for g in plain.groups} == {g.entity for g in flagged.groups}


def test_query_too_broad(fixture_index, ontology):
    from contextsearch.errors import QueryTooBroadError

    old = fixture_index.config.max_postings
    fixture_index.config.max_postings = 1
    try:
        with pytest.raises(QueryTooBroadError):
            evaluate(parse_query("class:Plant (occurs-with the*)", ontology), fixture_index)
    finally:
        fixture_index.config.max_postings = old


# -- re-rooting ---------------------------------------------------------------

def test_change_root_identity(fixture_index, ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    same = change_root(tree, "")
    assert to_text(same, ontology) == to_text(tree, ontology)


def test_change_root_at_europe_preserves_witness_facts(fixture_index, ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    rerooted = change_root(tree, "0")
    assert rerooted.root.kind == "instance"
    assert rerooted.root.ref == ontology.entity_id("Europe")
    check_types(rerooted, ontology)

    original = evaluate(tree, fixture_index)
    flipped = evaluate(rerooted, fixture_index)
    facts_a = {e.fact for g in original.groups for e in g.evidence if e.kind == "fact"}
    facts_b = {e.fact for g in flipped.groups for e in g.evidence if e.kind == "fact"}
    assert facts_a and facts_a == facts_b


def test_change_root_through_subquery_item(ontology, fixture_index):
    tree = parse_query("class:Plant (occurs-with edible entity:Rhubarb)", ontology)
    rerooted = change_root(tree, "0.1")
    assert rerooted.root.ref == ontology.entity_id("Rhubarb")
    arc = rerooted.root.arcs[-1]
    assert arc.kind == "occurs-with"
    kinds = sorted(i.kind for i in arc.items)
    assert kinds == ["subquery", "word"]


def test_change_root_rejects_arc_paths(ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    with pytest.raises(FocusPathError):
        change_root(tree, "a1")
    with pytest.raises(FocusPathError):
        change_root(tree, "1.0")   # item 0 of the occurs-with arc is a word


# -- suggestions ---------------------------------------------------------------

def test_suggest_empty_query_plan(fixture_index):
    s = suggest(None, "", "plan", fixture_index)
    assert any(e.label == "Plant" for e in s.classes)
    assert s.preselected == ("classes", 0)


def test_suggest_relations_at_fig1_root(fixture_index, ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    s = suggest(tree, "", "", fixture_index)
    labels = [e.label for e in s.relations]
    assert "cultivated-in" in labels
    assert "native-to" not in labels          # already an arc of the node
    assert s.preselected == ("relations", labels.index("cultivated-in"))


def test_suggest_zero_instance_focus_is_empty(fixture_index, ontology):
    tree = QueryTree(root=parse_query("class:Mineral", ontology).root)
    s = suggest(tree, "", "", fixture_index)
    assert not s.words and not s.classes and not s.instances and not s.relations
    assert s.preselected is None


def test_suggest_word_candidates_for_arc_focus(fixture_index, ontology):
    tree = parse_query("class:Plant (occurs-with edible)", ontology)
    s = suggest(tree, "a0", "lea", fixture_index)
    assert any(e.label == "leaves" for e in s.words)
    assert s.preselected[0] == "words"


def test_all_suggestions_lead_to_hits(fixture_index, ontology):
    states = [
        (None, "", "plan"),
        (parse_query("class:Plant", ontology), "", ""),
        (parse_query("class:Plant", ontology), "", "e"),
        (parse_query(FIG1_QUERY, ontology), "", ""),
        (parse_query("class:Plant (occurs-with edible)", ontology), "a0", "lea"),
        (parse_query("class:Plant (native-to entity:Europe)", ontology), "0", ""),
    ]
    checked = 0
    for tree, focus, typed in states:
        s = suggest(tree, focus, typed, fixture_index)
        for kind, entries in (("class", s.classes), ("instance", s.instances),
                              ("relation", s.relations), ("word", s.words)):
            for e in entries:
                payload = (e.label, e.reverse) if kind == "relation" else e.label
                applied = apply_suggestion(tree, focus, kind, payload,
                                           fixture_index.ontology)
                check_types(applied, fixture_index.ontology)
                rs = evaluate(applied, fixture_index)
                assert rs.total > 0, (kind, e.label, focus, typed)
                checked += 1
    assert checked > 5


# -- randomized oracle ----------------------------------------------------------

def test_evaluate_matches_naive_interpreter(tmp_path):
    rng = random.Random(2024)
    mismatches = 0
    for corpus_round in range(12):
        onto = random_ontology(rng, tmp_path)
        contexts = random_contexts(rng, onto)
        index = build_index(contexts, onto)
        for _ in range(6):
            node = random_query(rng, onto, contexts)
            tree = QueryTree(root=node)
            check_types(tree, onto)
            got = {g.entity for g in evaluate(tree, index).groups}
            expect = naive_evaluate(tree, contexts, onto)
            assert got == expect, to_text(tree, onto)
    assert mismatches == 0


def test_monotonicity_adding_arcs_never_grows_results(tmp_path):
    rng = random.Random(77)
    onto = random_ontology(rng, tmp_path)
    contexts = random_contexts(rng, onto)
    index = build_index(contexts, onto)
    for _ in range(30):
        node = random_query(rng, onto, contexts)
        if not node.arcs:
            continue
        tree_full = QueryTree(root=node)
        from contextsearch.query import copy_node
        trimmed = copy_node(node)
        trimmed.arcs = trimmed.arcs[:-1]
        full = {g.entity for g in evaluate(tree_full, index).groups}
        less = {g.entity for g in evaluate(QueryTree(root=trimmed), index).groups}
        assert full <= less


def test_full_text_special_case(tmp_path):
    # class node + words-only occurs-with behaves as full-text search
    # restricted to the class
    rng = random.Random(31)
    onto = random_ontology(rng, tmp_path)
    contexts = random_contexts(rng, onto)
    index = build_index(contexts, onto)
    from contextsearch.query.grammar import Arc, OwItem, QueryNode

    word = index.vocab[len(index.vocab) // 2]
    node = QueryNode(kind="class", ref=onto.root,
                     arcs=[Arc(kind="occurs-with", items=[OwItem(kind="word", word=word)])])
    got = {g.entity for g in evaluate(QueryTree(root=node), index).groups}
    expect = set()
    for c in contexts:
        if word in [w.lower() for w in c.words()]:
            expect.update(c.entities())
    assert got == expect


def test_determinism_of_ranking(fixture_index, ontology):
    tree = parse_query(FIG1_QUERY, ontology)
    a = evaluate(tree, fixture_index)
    b = evaluate(tree, fixture_index)
    assert [(g.entity, g.score) for g in a.groups] == [(g.entity, g.score) for g in b.groups]
