"""HTTP service exposing search and the judging workflow.

The service is stateless beyond an in-memory index set and the judgment
journal: restarting replays the journal, so five evaluators can judge
concurrently and crash-safely. Read endpoints never mutate; POST /judge is
the only mutation and serializes journal appends behind a lock.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .analysis import strip_html
from .collection import (
    Judgment,
    RELEVANCE_SCALE,
    journal_append,
    journal_read,
    latest_judgments,
    now_timestamp,
)
from .corpus import Document, Query
from .index import InvertedIndex
from .lexicons import Lexicons, judging_guidelines
from .retrieval import B_DEFAULT, K1_DEFAULT, search

LEAD_SNIPPET_CHARS = 200


@dataclass
class Campaign:
    """A fixed judging campaign: topics, candidates, and the roster."""

    topics: list[Query]
    candidates: dict[str, list[str]]
    evaluators: list[str]

    def pairs(self) -> list[tuple[str, str]]:
        """All (qid, docid) pairs: topics in qid order, candidates in
        selection order."""
        ordered = sorted(self.topics, key=lambda q: q.qid)
        return [(q.qid, docid) for q in ordered for docid in self.candidates.get(q.qid, [])]

    def query_text(self, qid: str) -> str:
        for q in self.topics:
            if q.qid == qid:
                return q.text
        return ""


@dataclass
class ServiceState:
    """Everything one running service instance works over."""

    lexicons: Lexicons
    indexes: dict[str, InvertedIndex] = field(default_factory=dict)
    documents: dict[str, Document] = field(default_factory=dict)
    default_preset: str = "default"
    campaign: Campaign | None = None
    journal_path: Path | None = None
    k1: float = K1_DEFAULT
    b: float = B_DEFAULT
    cors_origins: tuple[str, ...] = ("*",)

    def __post_init__(self) -> None:
        self._lock = threading.Lock()
        self._latest: dict[tuple[str, str, str], Judgment] = {}
        if self.journal_path is not None:
            self._latest = latest_judgments(journal_read(self.journal_path))

    def record(self, judgment: Judgment) -> None:
        with self._lock:
            if self.journal_path is not None:
                journal_append(self.journal_path, judgment)
            self._latest[(judgment.qid, judgment.docid, judgment.evaluator_id)] = judgment

    def judged_pairs(self, evaluator_id: str) -> set[tuple[str, str]]:
        with self._lock:
            return {(q, d) for (q, d, e) in self._latest if e == evaluator_id}

    def judgment_keys(self) -> list[tuple[str, str, str]]:
        with self._lock:
            return list(self._latest)


class JudgmentIn(BaseModel):
    qid: str
    docid: str
    evaluator: str
    grade: int


def _doc_payload(doc: Document) -> dict:
    return {
        "id": doc.id,
        "title": strip_html(doc.title),
        "lead": strip_html(doc.lead),
        "content": strip_html(doc.content),
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="tetunsearch service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(state.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _campaign() -> Campaign:
        if state.campaign is None:
            raise HTTPException(status_code=503, detail="no judging campaign active")
        return state.campaign

    @app.get("/search")
    def search_endpoint(q: str = "", k: int = 10, preset: str | None = None):
        if not state.indexes:
            raise HTTPException(status_code=503, detail="no index loaded")
        preset_name = preset or state.default_preset
        index = state.indexes.get(preset_name)
        if index is None:
            raise HTTPException(
                status_code=400,
                detail=f"unknown preset {preset_name!r}; loaded: {sorted(state.indexes)}",
            )
        if k < 1:
            raise HTTPException(status_code=400, detail="k must be >= 1")
        if not q.strip():
            raise HTTPException(status_code=400, detail="empty_query")
        result = search(index, Query(qid="web", text=q), index.config, state.lexicons,
                        k=k, k1=state.k1, b=state.b)
        if result.empty_query:
            raise HTTPException(status_code=400, detail="empty_query")
        hits = []
        for e in result.entries:
            doc = state.documents.get(e.docid)
            lead = strip_html(doc.lead) if doc else ""
            hits.append(
                {
                    "docid": e.docid,
                    "rank": e.rank,
                    "score": e.score,
                    "title": strip_html(doc.title) if doc else e.docid,
                    "lead": lead[:LEAD_SNIPPET_CHARS],
                }
            )
        return hits

    @app.get("/judge/next")
    def judge_next(evaluator: str):
        campaign = _campaign()
        if evaluator not in campaign.evaluators:
            raise HTTPException(status_code=403, detail=f"unknown evaluator {evaluator!r}")
        pairs = campaign.pairs()
        done = state.judged_pairs(evaluator)
        progress = {"done": len(done & set(pairs)), "total": len(pairs)}
        for qid, docid in pairs:
            if (qid, docid) in done:
                continue
            doc = state.documents.get(docid)
            return {
                "complete": False,
                "qid": qid,
                "query": campaign.query_text(qid),
                "docid": docid,
                "document": _doc_payload(doc) if doc else {"id": docid},
                "scale": list(RELEVANCE_SCALE),
                "progress": progress,
            }
        return {"complete": True, "progress": progress}

    @app.post("/judge")
    def judge(payload: JudgmentIn):
        campaign = _campaign()
        if payload.evaluator not in campaign.evaluators:
            raise HTTPException(status_code=403, detail=f"unknown evaluator {payload.evaluator!r}")
        if not 0 <= payload.grade <= 3:
            raise HTTPException(status_code=422, detail=f"grade must be 0..3, got {payload.grade}")
        if (payload.qid, payload.docid) not in set(campaign.pairs()):
            raise HTTPException(
                status_code=422,
                detail=f"({payload.qid!r}, {payload.docid!r}) is not part of this campaign",
            )
        state.record(
            Judgment(
                qid=payload.qid,
                docid=payload.docid,
                evaluator_id=payload.evaluator,
                grade=payload.grade,
                timestamp=now_timestamp(),
            )
        )
        done = state.judged_pairs(payload.evaluator)
        pairs = campaign.pairs()
        return {"ok": True, "done": len(done & set(pairs)), "total": len(pairs)}

    @app.get("/guidelines")
    def guidelines():
        return {"text": judging_guidelines(), "scale": list(RELEVANCE_SCALE)}

    @app.get("/campaign/progress")
    def progress():
        campaign = _campaign()
        pairs = set(campaign.pairs())
        per_evaluator = {e: 0 for e in campaign.evaluators}
        per_topic = {q.qid: 0 for q in campaign.topics}
        total = 0
        for qid, docid, evaluator in state.judgment_keys():
            if (qid, docid) not in pairs or evaluator not in per_evaluator:
                continue
            total += 1
            per_evaluator[evaluator] += 1
            per_topic[qid] = per_topic.get(qid, 0) + 1
        return {
            "per_evaluator": per_evaluator,
            "per_topic": per_topic,
            "total_judgments": total,
            "pairs_per_evaluator": len(pairs),
            "evaluators": campaign.evaluators,
        }

    return app


def build_state(
    corpus: Sequence[Document],
    lexicons: Lexicons,
    scheme: str = "T+L+C",
    presets: Sequence[str] | None = None,
    default_preset: str = "default",
    campaign: Campaign | None = None,
    journal_path: str | Path | None = None,
    k1: float = K1_DEFAULT,
    b: float = B_DEFAULT,
    cors_origins: Sequence[str] = ("*",),
) -> ServiceState:
    """Index the corpus once per preset and assemble the service state."""
    from .analysis import PRESET_NAMES, preset as preset_config
    from .index import build_index

    names = tuple(presets) if presets else PRESET_NAMES
    indexes = {name: build_index(corpus, scheme, preset_config(name), lexicons) for name in names}
    if default_preset not in indexes:
        raise ValueError(f"default preset {default_preset!r} not among built presets {names}")
    return ServiceState(
        lexicons=lexicons,
        indexes=indexes,
        documents={d.id: d for d in corpus},
        default_preset=default_preset,
        campaign=campaign,
        journal_path=Path(journal_path) if journal_path else None,
        k1=k1,
        b=b,
        cors_origins=tuple(cors_origins),
    )
