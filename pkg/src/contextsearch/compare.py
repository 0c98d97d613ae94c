"""Decomposition-mode comparison: contexts vs. sentences vs. sections.

Builds one index per mode, runs every query on each, and reports the quality
table plus a paired two-tailed t-test on per-topic F1 of contexts against the
sentences baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from scipy import stats as scipy_stats

from .corpus import Corpus
from .evalmetrics import METRIC_NAMES, MetricsReport, metrics
from .index import IndexConfig, build_index
from .nlp import MODES, DecomposeConfig, decompose
from .ontology import Ontology
from .query import evaluate, parse_query


@dataclass
class ModeReport:
    mode: str
    report: MetricsReport
    runs: Dict[str, List[str]] = field(default_factory=dict)


@dataclass
class CompareReport:
    modes: List[ModeReport]
    t_statistic: Optional[float]
    p_value: Optional[float]

    def row(self, mode: str) -> ModeReport:
        for m in self.modes:
            if m.mode == mode:
                return m
        raise KeyError(mode)


def run_queries(queries: Sequence[Tuple[str, str]], index, ontology: Ontology
                ) -> Dict[str, List[str]]:
    runs = {}
    for topic, text in queries:
        tree = parse_query(text, ontology)
        rs = evaluate(tree, index)
        runs[topic] = [ontology.entity_name(g.entity) for g in rs.groups]
    return runs


def compare_modes(queries: Sequence[Tuple[str, str]], qrels: Dict[str, set],
                  corpus: Corpus, ontology: Ontology,
                  modes: Sequence[str] = MODES,
                  decompose_config: Optional[DecomposeConfig] = None,
                  index_config: Optional[IndexConfig] = None) -> CompareReport:
    mode_reports: List[ModeReport] = []
    for mode in modes:
        contexts = decompose(corpus, ontology, mode, decompose_config)
        index = build_index(contexts, ontology, index_config)
        runs = run_queries(queries, index, ontology)
        mode_reports.append(ModeReport(mode=mode, report=metrics(runs, qrels), runs=runs))

    t_stat = p_val = None
    by_mode = {m.mode: m for m in mode_reports}
    if "contexts" in by_mode and "sentences" in by_mode:
        topics = sorted(by_mode["contexts"].report.topics)
        a = [by_mode["contexts"].report.topics[t].f1 for t in topics]
        b = [by_mode["sentences"].report.topics[t].f1 for t in topics]
        if len(topics) >= 2 and any(x != y for x, y in zip(a, b)):
            t_stat, p_val = scipy_stats.ttest_rel(a, b)
            t_stat, p_val = float(t_stat), float(p_val)
            if math.isnan(p_val):
                t_stat = p_val = None
    return CompareReport(modes=mode_reports, t_statistic=t_stat, p_value=p_val)


def format_table(report: CompareReport) -> str:
    headers = ["mode", "#FP", "#FN", "Precision", "Recall", "F1",
               "P@10", "R-Prec", "MAP", "nDCG"]
    rows = [headers]
    for m in report.modes:
        r = m.report
        rows.append([m.mode, str(r.fp), str(r.fn)]
                    + [f"{r.macro[k]:.3f}" for k in METRIC_NAMES[:3]]
                    + [f"{r.macro[k]:.3f}" for k in METRIC_NAMES[3:]])
    widths = [max(len(row[i]) for row in rows) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
    if report.p_value is not None:
        lines.append(f"paired t-test (contexts vs sentences, per-topic F1): "
                     f"t={report.t_statistic:.3f} p={report.p_value:.4f}")
    else:
        lines.append("paired t-test (contexts vs sentences, per-topic F1): n/a")
    return "\n".join(lines)


def report_json(report: CompareReport) -> dict:
    out = {"modes": [], "t_statistic": report.t_statistic, "p_value": report.p_value}
    for m in report.modes:
        out["modes"].append({
            "mode": m.mode,
            "fp": m.report.fp,
            "fn": m.report.fn,
            "macro": dict(m.report.macro),
            "topics": {t: vars(tm) for t, tm in m.report.topics.items()},
        })
    return out
