"""Test-collection building: pooling, candidate selection, judgments,
majority-vote adjudication, and qrels export.

Judgments persist in an append-only JSON-lines journal keyed by
(qid, docid, evaluator_id); the latest entry per key wins, which makes
resubmission an overwrite and keeps the whole assessment auditable.
"""

from __future__ import annotations

import json
import math
import statistics
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError
from .trec import QrelsEntry, RunEntry, write_qrels
from .validation import check_grade, check_positive_int

# The 0-3 relevance scale presented to evaluators.
RELEVANCE_SCALE: tuple[dict, ...] = (
    {"grade": 0, "label": "no useful information", "description": "not relevant"},
    {"grade": 1, "label": "some useful information", "description": "less relevant"},
    {"grade": 2, "label": "significant information", "description": "relevant"},
    {"grade": 3, "label": "essential information", "description": "highly relevant"},
)


@dataclass(frozen=True)
class Judgment:
    qid: str
    docid: str
    evaluator_id: str
    grade: int
    timestamp: str


@dataclass
class Pool:
    """Per-topic candidate documents merged from several runs.

    ``topics`` maps qid to (docid, best_score) pairs ordered by descending
    best score, ascending docid. Counts before deduplication are kept both
    in total and per topic.
    """

    depth: int
    topics: dict[str, list[tuple[str, float]]] = field(default_factory=dict)
    pre_dedup_total: int = 0
    pre_dedup_per_topic: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def post_dedup_total(self) -> int:
        return sum(len(v) for v in self.topics.values())


def pool_runs(runs: Sequence[Sequence[RunEntry]], depth: int) -> Pool:
    """Union of each run's top-``depth`` docids per topic.

    A document pooled by several runs keeps its best (maximum) score; score
    scales across runs are not normalized. Runs covering different topic
    sets produce warnings, not failures.
    """
    check_positive_int("depth", depth)
    best: dict[str, dict[str, float]] = {}
    pre_total = 0
    pre_per_topic: dict[str, int] = {}
    qid_sets = []
    for run in runs:
        qids = set()
        for e in run:
            qids.add(e.qid)
            if e.rank > depth:
                continue
            pre_total += 1
            pre_per_topic[e.qid] = pre_per_topic.get(e.qid, 0) + 1
            by_doc = best.setdefault(e.qid, {})
            if e.docid not in by_doc or e.score > by_doc[e.docid]:
                by_doc[e.docid] = e.score
        qid_sets.append(qids)
    warnings = []
    all_qids = set().union(*qid_sets) if qid_sets else set()
    for i, qids in enumerate(qid_sets):
        missing = all_qids - qids
        if missing:
            warnings.append(f"run {i} has no entries for topics: {', '.join(sorted(missing))}")
    topics = {
        qid: sorted(by_doc.items(), key=lambda kv: (-kv[1], kv[0]))
        for qid, by_doc in sorted(best.items())
    }
    return Pool(
        depth=depth,
        topics=topics,
        pre_dedup_total=pre_total,
        pre_dedup_per_topic=pre_per_topic,
        warnings=warnings,
    )


@dataclass(frozen=True)
class Candidates:
    """Judging candidates per topic, in selection order."""

    per_query: int
    topics: dict[str, list[str]]
    flagged: tuple[str, ...] = ()

    def pairs(self) -> list[tuple[str, str]]:
        """All (qid, docid) pairs, topics in qid order."""
        return [(qid, docid) for qid in sorted(self.topics) for docid in self.topics[qid]]


def select_judging_candidates(pool: Pool, per_query: int = 10) -> Candidates:
    """Top ``per_query`` pool documents per topic by best score.

    Topics with fewer pooled documents than requested contribute everything
    they have and are flagged.
    """
    check_positive_int("per_query", per_query)
    topics = {}
    flagged = []
    for qid, entries in pool.topics.items():
        topics[qid] = [docid for docid, _ in entries[:per_query]]
        if len(entries) < per_query:
            flagged.append(qid)
    return Candidates(per_query=per_query, topics=topics, flagged=tuple(flagged))


def majority_vote(grades: Sequence[int]) -> int:
    """Adjudicate one (qid, docid)'s grades to the modal grade.

    When several grades tie for the mode, the floor of the median of all
    submitted grades picks among them: the tied mode closest to that median
    wins, and of two equidistant modes the lower one does.
    """
    if not grades:
        raise ValueError("majority_vote requires at least one judgment")
    for g in grades:
        check_grade(g)
    counts = Counter(grades)
    top = max(counts.values())
    modes = sorted(g for g, c in counts.items() if c == top)
    if len(modes) == 1:
        return modes[0]
    anchor = math.floor(statistics.median(grades))
    return min(modes, key=lambda g: (abs(g - anchor), g))


def journal_append(path: str | Path, judgment: Judgment) -> None:
    """Append one judgment to the JSONL journal."""
    check_grade(judgment.grade)
    line = json.dumps(
        {
            "qid": judgment.qid,
            "docid": judgment.docid,
            "evaluator_id": judgment.evaluator_id,
            "grade": judgment.grade,
            "timestamp": judgment.timestamp,
        },
        ensure_ascii=False,
    )
    with Path(path).open("a", encoding="utf-8") as f:
        f.write(line + "\n")


def journal_read(path: str | Path) -> list[Judgment]:
    """Read the full journal in append order."""
    path = Path(path)
    judgments = []
    if not path.exists():
        return judgments
    for line_no, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            judgments.append(
                Judgment(
                    qid=obj["qid"],
                    docid=obj["docid"],
                    evaluator_id=obj["evaluator_id"],
                    grade=check_grade(obj["grade"]),
                    timestamp=obj.get("timestamp", ""),
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise DataError(f"{path}:{line_no}: bad journal line ({e})") from None
    return judgments


def latest_judgments(judgments: Iterable[Judgment]) -> dict[tuple[str, str, str], Judgment]:
    """Latest judgment per (qid, docid, evaluator): resubmission overwrites."""
    latest: dict[tuple[str, str, str], Judgment] = {}
    for j in judgments:
        latest[(j.qid, j.docid, j.evaluator_id)] = j
    return latest


def adjudicate(judgments: Iterable[Judgment]) -> dict[tuple[str, str], int]:
    """Majority-vote every judged (qid, docid) pair after per-evaluator dedup."""
    latest = latest_judgments(judgments)
    grades: dict[tuple[str, str], list[int]] = {}
    for (qid, docid, _evaluator), j in sorted(latest.items()):
        grades.setdefault((qid, docid), []).append(j.grade)
    return {pair: majority_vote(gs) for pair, gs in grades.items()}


def export_qrels(adjudicated: Mapping[tuple[str, str], int], path: str | Path) -> list[QrelsEntry]:
    """Write adjudicated grades as a TREC qrels file, sorted by qid, docid.

    Pooled-but-unjudged documents are simply absent (trec_eval treats
    missing entries as non-relevant). An empty adjudication set is an
    error, never an empty file.
    """
    if not adjudicated:
        raise DataError("no adjudicated judgments to export")
    entries = [
        QrelsEntry(qid=qid, docid=docid, grade=check_grade(grade))
        for (qid, docid), grade in sorted(adjudicated.items())
    ]
    write_qrels(entries, path)
    return entries


def now_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def pool_to_json(pool: Pool) -> dict:
    return {
        "depth": pool.depth,
        "pre_dedup_total": pool.pre_dedup_total,
        "pre_dedup_per_topic": pool.pre_dedup_per_topic,
        "post_dedup_total": pool.post_dedup_total,
        "topics": {
            qid: [{"docid": d, "best_score": s} for d, s in entries]
            for qid, entries in pool.topics.items()
        },
        "warnings": pool.warnings,
    }


def pool_from_json(obj: dict) -> Pool:
    try:
        return Pool(
            depth=obj["depth"],
            topics={
                qid: [(e["docid"], float(e["best_score"])) for e in entries]
                for qid, entries in obj["topics"].items()
            },
            pre_dedup_total=obj["pre_dedup_total"],
            pre_dedup_per_topic=dict(obj.get("pre_dedup_per_topic", {})),
            warnings=list(obj.get("warnings", [])),
        )
    except (KeyError, TypeError) as e:
        raise DataError(f"malformed pool JSON: {e}") from None


def candidates_to_json(candidates: Candidates) -> dict:
    return {
        "per_query": candidates.per_query,
        "topics": candidates.topics,
        "flagged": list(candidates.flagged),
    }


def candidates_from_json(obj: dict) -> Candidates:
    try:
        return Candidates(
            per_query=obj["per_query"],
            topics={qid: list(docids) for qid, docids in obj["topics"].items()},
            flagged=tuple(obj.get("flagged", ())),
        )
    except (KeyError, TypeError) as e:
        raise DataError(f"malformed candidates JSON: {e}") from None
