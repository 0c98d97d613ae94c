"""Ranked-retrieval quality measures over binary relevance judgments.

Per topic: false positives / negatives, precision, recall, F1, P@10, R-Prec,
average precision and nDCG (binary gain, log2(rank+1) discount). FP and FN are
reported as sums across topics, the other measures macro-averaged. Precision
of an empty run is 0 by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Set

METRIC_NAMES = ("precision", "recall", "f1", "p_at_10", "r_prec", "ap", "ndcg")


@dataclass
class TopicMetrics:
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    p_at_10: float
    r_prec: float
    ap: float
    ndcg: float


@dataclass
class MetricsReport:
    topics: Dict[str, TopicMetrics] = field(default_factory=dict)
    fp: int = 0
    fn: int = 0
    macro: Dict[str, float] = field(default_factory=dict)


def topic_metrics(run: Sequence, relevant: Set) -> TopicMetrics:
    if len(set(run)) != len(run):
        raise ValueError("run contains duplicate entities")
    if not relevant:
        raise ValueError("qrels topic has no relevant entities")
    retrieved = list(run)
    rel_retrieved = [r for r in retrieved if r in relevant]
    tp = len(rel_retrieved)
    fp = len(retrieved) - tp
    fn = len(relevant) - tp

    precision = tp / len(retrieved) if retrieved else 0.0
    recall = tp / len(relevant)
    f1 = (2 * precision * recall / (precision + recall)) if (precision + recall) else 0.0
    top10 = retrieved[:10]
    p_at_10 = sum(1 for r in top10 if r in relevant) / 10.0
    r = len(relevant)
    r_prec = sum(1 for x in retrieved[:r] if x in relevant) / r

    hits = 0
    ap_sum = 0.0
    dcg = 0.0
    for rank, x in enumerate(retrieved, start=1):
        if x in relevant:
            hits += 1
            ap_sum += hits / rank
            dcg += 1.0 / math.log2(rank + 1)
    ap = ap_sum / len(relevant)
    idcg = sum(1.0 / math.log2(i + 1) for i in range(1, len(relevant) + 1))
    ndcg = dcg / idcg if idcg else 0.0

    return TopicMetrics(fp=fp, fn=fn, precision=precision, recall=recall, f1=f1,
                        p_at_10=p_at_10, r_prec=r_prec, ap=ap, ndcg=ndcg)


def metrics(run: Dict[str, Sequence], qrels: Dict[str, Set]) -> MetricsReport:
    """Evaluate a run (topic -> ranked entities) against qrels (topic -> relevant set)."""
    report = MetricsReport()
    for topic in run:
        if topic not in qrels:
            raise KeyError(f"topic {topic!r} missing from qrels")
    for topic, ranked in run.items():
        tm = topic_metrics(ranked, qrels[topic])
        report.topics[topic] = tm
        report.fp += tm.fp
        report.fn += tm.fn
    n = len(report.topics)
    for name in METRIC_NAMES:
        report.macro[name] = (sum(getattr(t, name) for t in report.topics.values()) / n
                              if n else 0.0)
    return report


def load_qrels(path) -> Dict[str, Set[str]]:
    """TSV: topic<TAB>entity, one judged-relevant entity per line."""
    out: Dict[str, Set[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            topic, entity = line.split("\t")
            out.setdefault(topic, set()).add(entity)
    return out


def load_queries(path) -> List:
    """TSV: topic<TAB>query-string."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            topic, query = line.split("\t", 1)
            out.append((topic, query))
    return out
