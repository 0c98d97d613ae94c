"""Command line interface: build, decompose, serve, eval, query."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .compare import compare_modes, format_table, report_json
from .corpus import load_corpus
from .errors import ContextSearchError
from .evalmetrics import load_qrels, load_queries
from .index import IndexConfig, build_index, open_index, write_index
from .nlp import MODES, DecomposeConfig, decompose
from .ontology import load_ontology
from .query import evaluate, parse_query


def _env(name, default):
    return os.environ.get("CONTEXTSEARCH_" + name, default)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="contextsearch",
                                description="semantic full-text search over sentence contexts")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="decompose a corpus and write the binary index")
    b.add_argument("--corpus", required=True)
    b.add_argument("--ontology", required=True)
    b.add_argument("--mode", choices=MODES, default="contexts")
    b.add_argument("--out", required=True, help="output directory for the three index files")
    b.add_argument("--prefix-len", type=int, default=int(_env("PREFIX_LEN", 4)))
    b.add_argument("--nlp-config", help="JSON file with decomposition settings")

    d = sub.add_parser("decompose", help="decompose a corpus to JSON-lines contexts")
    d.add_argument("--mode", choices=MODES, default="contexts")
    d.add_argument("--corpus", required=True)
    d.add_argument("--ontology", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--nlp-config")

    s = sub.add_parser("serve", help="serve the HTTP API over a built index")
    s.add_argument("--index", default=_env("INDEX", None), required=_env("INDEX", None) is None)
    s.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    s.add_argument("--port", type=int, default=int(_env("PORT", 8080)))
    s.add_argument("--page-size", type=int, default=int(_env("PAGE_SIZE", 20)))
    s.add_argument("--suggestion-length", type=int, default=int(_env("SUGGESTION_LENGTH", 8)))
    s.add_argument("--broccoli-first", action="store_true",
                   help="legacy ranking flag: pin the entity named Broccoli to the top")

    e = sub.add_parser("eval", help="compare decomposition modes on a query/qrels set")
    e.add_argument("--corpus", required=True)
    e.add_argument("--ontology", required=True)
    e.add_argument("--queries", required=True, help="TSV: topic<TAB>query string")
    e.add_argument("--qrels", required=True, help="TSV: topic<TAB>relevant entity")
    e.add_argument("--modes", default=",".join(MODES))
    e.add_argument("--json", action="store_true", help="machine-readable output")
    e.add_argument("--tsv", help="also write the table as TSV to this path")

    q = sub.add_parser("query", help="one-shot search against a built index")
    q.add_argument("--index", required=True)
    q.add_argument("--limit", type=int, default=10)
    q.add_argument("text", help="query in the tree grammar")
    return p


def cmd_build(args) -> int:
    onto = load_ontology(args.ontology)
    corpus = load_corpus(args.corpus, onto)
    for w in corpus.warnings:
        print(f"warning: {w}", file=sys.stderr)
    nlp_cfg = DecomposeConfig.from_json(args.nlp_config) if args.nlp_config else None
    contexts = decompose(corpus, onto, args.mode, nlp_cfg)
    index = build_index(contexts, onto, IndexConfig(prefix_len=args.prefix_len))
    files = write_index(index, args.out)
    st = index.stats
    print(f"contexts={st.contexts} postings={st.postings} blocks={st.blocks} "
          f"entities={st.entities} words={st.words}")
    print(f"wrote {files.contexts}, {files.relations}, {files.excerpts}")
    return 0


def cmd_decompose(args) -> int:
    onto = load_ontology(args.ontology)
    corpus = load_corpus(args.corpus, onto)
    nlp_cfg = DecomposeConfig.from_json(args.nlp_config) if args.nlp_config else None
    contexts = decompose(corpus, onto, args.mode, nlp_cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        for ctx in contexts:
            items = []
            for it in ctx.items:
                if it.word is not None:
                    items.append({"pos": it.position, "word": it.word})
                else:
                    items.append({"pos": it.position, "entity": onto.entity_name(it.entity)})
            rec = {"cid": ctx.cid, "doc": ctx.doc, "sentence": ctx.sentence, "items": items}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(contexts)} contexts to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import ServerConfig, create_app

    index = open_index(args.index)
    app = create_app(index, ServerConfig(page_size=args.page_size,
                                         suggestion_length=args.suggestion_length,
                                         rank_broccoli_first=args.broccoli_first))
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def cmd_eval(args) -> int:
    onto = load_ontology(args.ontology)
    corpus = load_corpus(args.corpus, onto)
    queries = load_queries(args.queries)
    qrels = load_qrels(args.qrels)
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    report = compare_modes(queries, qrels, corpus, onto, modes=modes)
    if args.json:
        print(json.dumps(report_json(report), indent=2))
    else:
        print(format_table(report))
    if args.tsv:
        with open(args.tsv, "w", encoding="utf-8") as fh:
            fh.write("mode\tFP\tFN\tprecision\trecall\tf1\tp@10\tr-prec\tmap\tndcg\n")
            for m in report.modes:
                r = m.report
                cells = [m.mode, r.fp, r.fn] + [f"{r.macro[k]:.6f}" for k in
                                                ("precision", "recall", "f1", "p_at_10",
                                                 "r_prec", "ap", "ndcg")]
                fh.write("\t".join(str(c) for c in cells) + "\n")
    return 0


def cmd_query(args) -> int:
    index = open_index(args.index)
    onto = index.ontology
    tree = parse_query(args.text, onto)
    rs = evaluate(tree, index)
    print(f"{rs.total} hits")
    for rank, g in enumerate(rs.groups[:args.limit], start=1):
        print(f"{rank:3d}. {onto.entity_name(g.entity)}  (score {g.score})")
        for ev in g.evidence[:2]:
            if ev.kind == "context":
                print(f"      [{ev.arc_label}] {index.excerpt(ev.cid).text}")
            else:
                s, rel, o = ev.fact
                print(f"      [{ev.arc_label}] {onto.entity_name(s)} {rel} {onto.entity_name(o)}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"build": cmd_build, "decompose": cmd_decompose, "serve": cmd_serve,
                "eval": cmd_eval, "query": cmd_query}
    try:
        return handlers[args.command](args)
    except ContextSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
