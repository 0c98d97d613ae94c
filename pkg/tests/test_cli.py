import json

import pytest

from contextsearch.cli import main

from conftest import ONTOLOGY_TSV, make_fixture_docs


@pytest.fixture()
def input_files(tmp_path):
    onto = tmp_path / "ontology.tsv"
    onto.write_text(ONTOLOGY_TSV, encoding="utf-8")
    corpus = tmp_path / "corpus.jsonl"
    with open(corpus, "w", encoding="utf-8") as fh:
        for doc in make_fixture_docs():
            fh.write(json.dumps(doc) + "\n")
    return onto, corpus


def test_build_reports_stats_and_serves_query(tmp_path, input_files, capsys):
    onto, corpus = input_files
    out = tmp_path / "idx"
    rc = main(["build", "--corpus", str(corpus), "--ontology", str(onto),
               "--mode", "contexts", "--out", str(out)])
    captured = capsys.readouterr().out
    assert rc == 0
    assert "contexts=5" in captured     # 4 rhubarb contexts + 1 broccoli sentence
    for name in ("index.contexts", "index.relations", "index.excerpts"):
        assert (out / name).exists()

    rc = main(["query", "--index", str(out),
               "class:Plant (native-to entity:Europe) (occurs-with edible leav*)"])
    captured = capsys.readouterr().out
    assert rc == 0
    assert "Broccoli" in captured
    assert "Rhubarb" not in captured


def test_build_empty_corpus_ok(tmp_path, input_files, capsys):
    onto, _ = input_files
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    rc = main(["build", "--corpus", str(empty), "--ontology", str(onto),
               "--out", str(tmp_path / "idx0")])
    assert rc == 0
    assert "contexts=0" in capsys.readouterr().out


def test_build_corrupted_ontology_cites_line(tmp_path, input_files, capsys):
    _, corpus = input_files
    bad = tmp_path / "bad.tsv"
    lines = ONTOLOGY_TSV.splitlines()
    lines[6] = "instance\tBroccoli\tis-a"     # line 7: too few fields
    bad.write_text("\n".join(lines) + "\n", encoding="utf-8")
    rc = main(["build", "--corpus", str(corpus), "--ontology", str(bad),
               "--out", str(tmp_path / "idxbad")])
    assert rc == 1
    assert "line 7" in capsys.readouterr().err


def test_decompose_emits_jsonl(tmp_path, input_files, capsys):
    onto, corpus = input_files
    out = tmp_path / "contexts.jsonl"
    rc = main(["decompose", "--mode", "contexts", "--corpus", str(corpus),
               "--ontology", str(onto), "--out", str(out)])
    assert rc == 0
    records = [json.loads(l) for l in out.read_text(encoding="utf-8").splitlines()]
    assert len(records) == 5
    first = records[0]
    assert set(first) == {"cid", "doc", "sentence", "items"}
    kinds = {("word" if "word" in item else "entity")
             for rec in records for item in rec["items"]}
    assert kinds == {"word", "entity"}
    ent_items = [i for r in records for i in r["items"] if "entity" in i]
    assert {"Rhubarb", "Broccoli"} == {i["entity"] for i in ent_items}
    positions = [i["pos"] for i in records[0]["items"]]
    assert positions == sorted(positions)


def test_eval_prints_table_and_tsv(tmp_path, input_files, capsys):
    onto, corpus = input_files
    (tmp_path / "queries.tsv").write_text(
        "fig1\tclass:Plant (native-to entity:Europe) (occurs-with edible leav*)\n",
        encoding="utf-8")
    (tmp_path / "qrels.tsv").write_text("fig1\tBroccoli\n", encoding="utf-8")
    rc = main(["eval", "--corpus", str(corpus), "--ontology", str(onto),
               "--queries", str(tmp_path / "queries.tsv"),
               "--qrels", str(tmp_path / "qrels.tsv"),
               "--tsv", str(tmp_path / "report.tsv")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "contexts" in out and "sentences" in out and "sections" in out
    tsv = (tmp_path / "report.tsv").read_text(encoding="utf-8").splitlines()
    assert tsv[0].startswith("mode\tFP\tFN")
    assert len(tsv) == 4


def test_eval_json_output(tmp_path, input_files, capsys):
    onto, corpus = input_files
    (tmp_path / "queries.tsv").write_text("t\tentity:Broccoli\n", encoding="utf-8")
    (tmp_path / "qrels.tsv").write_text("t\tBroccoli\n", encoding="utf-8")
    rc = main(["eval", "--corpus", str(corpus), "--ontology", str(onto),
               "--queries", str(tmp_path / "queries.tsv"),
               "--qrels", str(tmp_path / "qrels.tsv"), "--json"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert {m["mode"] for m in data["modes"]} == {"contexts", "sentences", "sections"}
    assert data["modes"][0]["macro"]["precision"] == 1.0


def test_missing_file_is_clean_error(tmp_path, capsys):
    rc = main(["build", "--corpus", "/nonexistent.jsonl",
               "--ontology", "/nonexistent.tsv", "--out", str(tmp_path / "x")])
    assert rc == 1
    assert "error" in capsys.readouterr().err
