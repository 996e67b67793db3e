"""trec_eval-compatible scoring: P@5, P@10, average precision, nDCG.

AP and P@k binarize at grade > 0; nDCG uses the raw grades with gain
``grade / log2(rank + 1)`` and an ideal ranking of all positively graded
documents sorted by descending grade. Topics whose qrels contain no
relevant document are reported per-topic (as zeros) but excluded from the
means, matching trec_eval's averaging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DataError
from .trec import QrelsEntry, RunEntry, group_by_qid

METRIC_NAMES = ("map", "p5", "p10", "ndcg")


def precision_at_k(ranked: Sequence[str], relevant: set[str], k: int) -> float:
    """|top-k that are relevant| / k; short lists count as non-relevant padding."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return sum(1 for d in ranked[:k] if d in relevant) / k


def average_precision(ranked: Sequence[str], relevant: set[str]) -> float:
    """Mean of precision at each relevant document's rank; unretrieved
    relevant documents contribute 0; 0.0 when no relevant documents exist."""
    if not relevant:
        return 0.0
    hits = 0
    total = 0.0
    for i, docid in enumerate(ranked, start=1):
        if docid in relevant:
            hits += 1
            total += hits / i
    return total / len(relevant)


def ndcg(ranked: Sequence[str], grades: Mapping[str, int], depth: int | None = None) -> float:
    """Normalized discounted cumulative gain over the full list by default."""
    if depth is not None:
        ranked = ranked[:depth]
    dcg = 0.0
    for i, docid in enumerate(ranked, start=1):
        grade = grades.get(docid, 0)
        if grade:
            dcg += grade / math.log2(i + 1)
    ideal = sorted((g for g in grades.values() if g > 0), reverse=True)
    if depth is not None:
        ideal = ideal[:depth]
    idcg = sum(g / math.log2(i + 1) for i, g in enumerate(ideal, start=1))
    if idcg == 0.0:
        return 0.0
    return dcg / idcg


@dataclass(frozen=True)
class TopicMetrics:
    qid: str
    ap: float
    p5: float
    p10: float
    ndcg: float


@dataclass(frozen=True)
class EvalReport:
    run_tag: str
    topics: tuple[TopicMetrics, ...]
    means: dict[str, float]


def evaluate(
    run: Sequence[RunEntry],
    qrels: Sequence[QrelsEntry],
    ndcg_depth: int | None = None,
) -> EvalReport:
    """Score one run against qrels, per topic and averaged.

    Topics are the qrels topics; run entries for other topics are ignored.
    Raises DataError when the run and qrels share no topic at all.
    """
    qrels_by_qid = group_by_qid(qrels)
    run_by_qid = group_by_qid(run)
    if not set(qrels_by_qid) & set(run_by_qid):
        raise DataError("run and qrels share no topic")
    run_tag = run[0].run_tag if run else ""
    topics = []
    sums = {name: 0.0 for name in METRIC_NAMES}
    evaluated = 0
    for qid in sorted(qrels_by_qid):
        grades = {e.docid: e.grade for e in qrels_by_qid[qid]}
        relevant = {d for d, g in grades.items() if g > 0}
        ranked = [e.docid for e in sorted(run_by_qid.get(qid, []), key=lambda e: e.rank)]
        metrics = TopicMetrics(
            qid=qid,
            ap=average_precision(ranked, relevant),
            p5=precision_at_k(ranked, relevant, 5),
            p10=precision_at_k(ranked, relevant, 10),
            ndcg=ndcg(ranked, grades, depth=ndcg_depth),
        )
        topics.append(metrics)
        if relevant:
            evaluated += 1
            sums["map"] += metrics.ap
            sums["p5"] += metrics.p5
            sums["p10"] += metrics.p10
            sums["ndcg"] += metrics.ndcg
    means = {name: (sums[name] / evaluated if evaluated else 0.0) for name in METRIC_NAMES}
    return EvalReport(run_tag=run_tag, topics=tuple(topics), means=means)


def report_to_json(report: EvalReport) -> dict:
    return {
        "run_tag": report.run_tag,
        "topics": [
            {"qid": t.qid, "ap": t.ap, "p5": t.p5, "p10": t.p10, "ndcg": t.ndcg}
            for t in report.topics
        ],
        "means": {name: report.means[name] for name in METRIC_NAMES},
    }


def report_from_json(obj: dict) -> EvalReport:
    try:
        topics = tuple(
            TopicMetrics(qid=t["qid"], ap=t["ap"], p5=t["p5"], p10=t["p10"], ndcg=t["ndcg"])
            for t in obj["topics"]
        )
        means = {name: float(obj["means"][name]) for name in METRIC_NAMES}
        return EvalReport(run_tag=obj["run_tag"], topics=topics, means=means)
    except (KeyError, TypeError) as e:
        raise DataError(f"malformed eval report JSON: {e}") from None


def render_report(report: EvalReport) -> str:
    """Aligned per-topic table for one run."""
    lines = [
        f"run: {report.run_tag}",
        f"{'qid':<10}{'AP':>8}{'P@5':>8}{'P@10':>8}{'nDCG':>8}",
    ]
    for t in report.topics:
        lines.append(f"{t.qid:<10}{t.ap:>8.4f}{t.p5:>8.4f}{t.p10:>8.4f}{t.ndcg:>8.4f}")
    m = report.means
    lines.append(f"{'mean':<10}{m['map']:>8.4f}{m['p5']:>8.4f}{m['p10']:>8.4f}{m['ndcg']:>8.4f}")
    return "\n".join(lines) + "\n"


def _split_run_tag(run_tag: str) -> tuple[str, str]:
    preset, sep, scheme = run_tag.rpartition("_")
    if not sep or not preset:
        raise DataError(f"run tag {run_tag!r} is not of the form <preset>_<scheme>")
    return preset, scheme


def render_matrix(
    reports: Sequence[EvalReport],
    presets: Sequence[str] | None = None,
    schemes: Sequence[str] | None = None,
) -> str:
    """Preset-by-scheme matrix of mean MAP/P@5/P@10/nDCG.

    Row order follows ``presets`` and ``schemes`` when given, else the
    order tags are first encountered in ``reports``.
    """
    by_tag = {r.run_tag: r for r in reports}
    if presets is None or schemes is None:
        seen_presets: list[str] = []
        seen_schemes: list[str] = []
        for r in reports:
            p, s = _split_run_tag(r.run_tag)
            if p not in seen_presets:
                seen_presets.append(p)
            if s not in seen_schemes:
                seen_schemes.append(s)
        presets = presets or seen_presets
        schemes = schemes or seen_schemes
    header = f"{'Preset':<18}{'Scheme':<8}{'MAP':>5}  {'P@5':>5}  {'P@10':>5}  {'nDCG':>5}"
    rule = f"{'-' * 16:<18}{'-' * 6:<8}{'-' * 5}  {'-' * 5}  {'-' * 5}  {'-' * 5}"
    lines = [header, rule]
    for preset in presets:
        for scheme in schemes:
            tag = f"{preset}_{scheme}"
            report = by_tag.get(tag)
            if report is None:
                raise DataError(f"missing eval report for run tag {tag!r}")
            m = report.means
            lines.append(
                f"{preset:<18}{scheme:<8}{m['map']:>5.3f}  {m['p5']:>5.3f}  {m['p10']:>5.3f}  {m['ndcg']:>5.3f}"
            )
    return "\n".join(lines) + "\n"


def matrix_to_json(reports: Sequence[EvalReport]) -> dict:
    runs = []
    for r in reports:
        preset, scheme = _split_run_tag(r.run_tag)
        runs.append(
            {
                "run_tag": r.run_tag,
                "preset": preset,
                "scheme": scheme,
                "map": r.means["map"],
                "p5": r.means["p5"],
                "p10": r.means["p10"],
                "ndcg": r.means["ndcg"],
            }
        )
    return {"runs": runs}
