"""HTTP API over one immutable index: /search, /suggest, /excerpt, /meta.

The API is stateless: query, focus and typed text travel in each request, so a
URL fully reproduces an interface state. Responses embed the index generation
stamp and a timing field; everything else is a pure function of the request.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (ContextSearchError, FocusPathError, QueryParseError,
                     QueryTooBroadError, QueryTypingError, UnknownContextError,
                     UnknownNameError)
from .index import SearchIndex
from .query import (EvalConfig, SuggestConfig, evaluate, from_json, parse_query,
                    suggest, to_json, to_text)


@dataclass
class ServerConfig:
    page_size: int = 20
    suggestion_length: int = 8
    evidence_limit: int = 3
    rank_broccoli_first: bool = False
    cors_origins: tuple = ("*",)


def create_app(index: SearchIndex, config: Optional[ServerConfig] = None) -> FastAPI:
    cfg = config or ServerConfig()
    app = FastAPI(title="contextsearch", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=list(cfg.cors_origins),
        allow_methods=["GET"], allow_headers=["*"])

    eval_cfg = EvalConfig(evidence_limit=cfg.evidence_limit,
                          rank_broccoli_first=cfg.rank_broccoli_first)
    suggest_cfg = SuggestConfig(list_length=cfg.suggestion_length)
    onto = index.ontology

    @app.exception_handler(ContextSearchError)
    async def handle_errors(request: Request, exc: ContextSearchError):
        if isinstance(exc, (QueryParseError, UnknownNameError, FocusPathError)):
            body = {"error": str(exc)}
            if isinstance(exc, QueryParseError) and exc.pos is not None:
                body["position"] = exc.pos
            return JSONResponse(status_code=400, content=body)
        if isinstance(exc, QueryTypingError):
            return JSONResponse(status_code=422, content={"error": str(exc)})
        if isinstance(exc, QueryTooBroadError):
            return JSONResponse(status_code=503,
                                content={"error": str(exc),
                                         "retry": "refine the query and try again"})
        if isinstance(exc, UnknownContextError):
            return JSONResponse(status_code=404, content={"error": str(exc)})
        return JSONResponse(status_code=500, content={"error": str(exc)})

    def parse_request_query(q: Optional[str], qjson: Optional[str]):
        if qjson:
            return from_json(json.loads(qjson), onto)
        if q and q.strip():
            return parse_query(q, onto)
        return None

    def excerpt_json(cid: int) -> dict:
        return index.excerpt(cid).to_json()

    @app.get("/search")
    def search(q: Optional[str] = None, qjson: Optional[str] = None,
               page: int = Query(0, ge=0), page_size: Optional[int] = None):
        t0 = time.perf_counter()
        tree = parse_request_query(q, qjson)
        if tree is None:
            raise QueryParseError("empty query", pos=0)
        rs = evaluate(tree, index, eval_cfg)
        size = page_size or cfg.page_size
        start = page * size
        groups = []
        for g in rs.groups[start:start + size]:
            evid = []
            for ev in g.evidence:
                if ev.kind == "context":
                    evid.append({"arc": ev.arc_label, "kind": "context",
                                 "cid": ev.cid, "excerpt": excerpt_json(ev.cid)})
                else:
                    s, rel, o = ev.fact
                    evid.append({"arc": ev.arc_label, "kind": "fact",
                                 "subject": onto.entity_name(s), "relation": rel,
                                 "object": onto.entity_name(o)})
            groups.append({
                "entity": {"id": g.entity, "name": onto.entity_name(g.entity)},
                "score": g.score,
                "evidence": evid,
            })
        return {
            "generation": index.generation,
            "query": to_text(tree, onto),
            "query_json": to_json(tree, onto),
            "total": rs.total,
            "page": page,
            "page_size": size,
            "groups": groups,
            "timing_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        }

    @app.get("/suggest")
    def suggest_endpoint(q: Optional[str] = None, qjson: Optional[str] = None,
                         focus: str = "", typed: str = ""):
        t0 = time.perf_counter()
        tree = parse_request_query(q, qjson)
        sugg = suggest(tree, focus, typed, index, suggest_cfg, eval_cfg)

        def entries(lst, with_reverse=False):
            out = []
            for e in lst:
                d = {"label": e.label, "score": e.score}
                if with_reverse:
                    d["reverse"] = e.reverse
                    d["source"] = e.source
                    d["target"] = e.target
                out.append(d)
            return out

        preselected = None
        if sugg.preselected is not None:
            preselected = {"list": sugg.preselected[0], "index": sugg.preselected[1]}
        return {
            "generation": index.generation,
            "query": to_text(tree, onto) if tree else "",
            "focus": focus,
            "typed": typed,
            "words": entries(sugg.words),
            "classes": entries(sugg.classes),
            "instances": entries(sugg.instances),
            "relations": entries(sugg.relations, with_reverse=True),
            "preselected": preselected,
            "timing_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        }

    @app.get("/excerpt")
    def excerpt(cid: int):
        return {"generation": index.generation, **excerpt_json(cid)}

    @app.get("/meta")
    def meta():
        return {
            "generation": index.generation,
            "contexts": index.stats.contexts,
            "postings": index.stats.postings,
            "blocks": index.stats.blocks,
            "entities": index.stats.entities,
            "words": index.stats.words,
            "classes": len(onto.class_names),
            "relations": sorted(onto.relations),
            "prefix_len": index.config.prefix_len,
            "page_size": cfg.page_size,
            "suggestion_length": cfg.suggestion_length,
        }

    return app
