"""Corpus and topic loading, validation, and characterization.

Corpora are JSON-lines files (one document object per line, UTF-8) with
required keys ``id``, ``title``, ``lead``, ``content`` and optional ``url``
and ``published_at``. Topics are TSV files of ``qid<TAB>query text``.
Loaders never drop bad lines silently: every problem becomes a line-numbered
diagnostic and any diagnostic aborts the load with the full list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Iterable

from .analysis import AnalyzerConfig, analyze_terms
from .errors import CorpusError
from .lexicons import Lexicons

DOCUMENT_FIELDS = ("title", "lead", "content")
_REQUIRED_KEYS = ("id", "title", "lead", "content")
_OPTIONAL_KEYS = ("url", "published_at")


@dataclass(frozen=True)
class Document:
    """A news article; lead and content may be empty, title may not."""

    id: str
    title: str
    lead: str = ""
    content: str = ""
    url: str | None = None
    published_at: str | None = None


@dataclass(frozen=True)
class Query:
    """One topic: a qid and the raw query text."""

    qid: str
    text: str


def _check_document_obj(obj: dict, line_no: int, seen_ids: dict[str, int]) -> tuple[Document | None, list[str]]:
    problems = []
    if not isinstance(obj, dict):
        return None, [f"line {line_no}: expected a JSON object, got {type(obj).__name__}"]
    for key in _REQUIRED_KEYS:
        if key not in obj:
            problems.append(f"line {line_no}: missing required key {key!r}")
        elif not isinstance(obj[key], str):
            problems.append(f"line {line_no}: key {key!r} must be a string")
    for key in _OPTIONAL_KEYS:
        if key in obj and obj[key] is not None and not isinstance(obj[key], str):
            problems.append(f"line {line_no}: key {key!r} must be a string")
    unknown = set(obj) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS)
    if unknown:
        problems.append(f"line {line_no}: unknown keys {sorted(unknown)}")
    if problems:
        return None, problems
    if not obj["id"]:
        problems.append(f"line {line_no}: empty id")
    elif obj["id"] in seen_ids:
        problems.append(
            f"line {line_no}: duplicate id {obj['id']!r} (first seen on line {seen_ids[obj['id']]})"
        )
    if not obj["title"]:
        problems.append(f"line {line_no}: empty title")
    published_at = obj.get("published_at")
    if published_at:
        try:
            date.fromisoformat(published_at)
        except ValueError:
            try:
                datetime.fromisoformat(published_at)
            except ValueError:
                problems.append(f"line {line_no}: published_at {published_at!r} is not an ISO-8601 date")
    if problems:
        return None, problems
    return Document(**obj), []


def load_corpus(path: str | Path) -> list[Document]:
    """Load and validate a JSONL corpus; raises CorpusError with per-line
    diagnostics on any problem."""
    path = Path(path)
    try:
        raw = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as e:
        raise CorpusError(f"{path}: not valid UTF-8 ({e})") from None
    docs: list[Document] = []
    diagnostics: list[str] = []
    seen_ids: dict[str, int] = {}
    for line_no, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            diagnostics.append(f"line {line_no}: invalid JSON ({e.msg})")
            continue
        doc, problems = _check_document_obj(obj, line_no, seen_ids)
        diagnostics.extend(problems)
        if doc is not None:
            seen_ids[doc.id] = line_no
            docs.append(doc)
    if diagnostics:
        raise CorpusError(f"{path}: invalid corpus", diagnostics)
    if not docs:
        raise CorpusError(f"{path}: empty corpus")
    return docs


def save_corpus(docs: Iterable[Document], path: str | Path) -> None:
    """Write documents as JSONL with a fixed key order (deterministic bytes)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as f:
        for doc in docs:
            obj = {"id": doc.id, "title": doc.title, "lead": doc.lead, "content": doc.content}
            if doc.url is not None:
                obj["url"] = doc.url
            if doc.published_at is not None:
                obj["published_at"] = doc.published_at
            f.write(json.dumps(obj, ensure_ascii=False))
            f.write("\n")


def load_topics(path: str | Path) -> list[Query]:
    """Load a qid<TAB>text topics file; blank and ``#`` lines are skipped."""
    path = Path(path)
    topics: list[Query] = []
    diagnostics: list[str] = []
    seen: dict[str, int] = {}
    for line_no, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t", 1)
        if len(parts) != 2:
            diagnostics.append(f"line {line_no}: expected 'qid<TAB>query text'")
            continue
        qid, text = parts[0].strip(), parts[1].strip()
        if not qid:
            diagnostics.append(f"line {line_no}: empty qid")
            continue
        if qid in seen:
            diagnostics.append(f"line {line_no}: duplicate qid {qid!r} (first seen on line {seen[qid]})")
            continue
        if not text:
            diagnostics.append(f"line {line_no}: empty query text for qid {qid!r}")
            continue
        seen[qid] = line_no
        topics.append(Query(qid, text))
    if diagnostics:
        raise CorpusError(f"{path}: invalid topics file", diagnostics)
    if not topics:
        raise CorpusError(f"{path}: no topics found")
    return topics


@dataclass(frozen=True)
class CorpusStats:
    """Deterministic corpus characterization under one analyzer config."""

    doc_count: int
    analyzer_id: str
    field_token_counts: dict[str, int] = field(default_factory=dict)
    vocabulary_size: int = 0
    top_terms: tuple[tuple[str, int], ...] = ()


def characterize(
    corpus: list[Document],
    config: AnalyzerConfig,
    lexicons: Lexicons,
    top_n: int = 20,
) -> CorpusStats:
    """Token counts per field, vocabulary size, and top-N terms."""
    field_counts = {f: 0 for f in DOCUMENT_FIELDS}
    term_counts: dict[str, int] = {}
    for doc in corpus:
        for fname in DOCUMENT_FIELDS:
            terms = analyze_terms(getattr(doc, fname), config, lexicons)
            field_counts[fname] += len(terms)
            for term in terms:
                term_counts[term] = term_counts.get(term, 0) + 1
    top = sorted(term_counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    return CorpusStats(
        doc_count=len(corpus),
        analyzer_id=config.id,
        field_token_counts=field_counts,
        vocabulary_size=len(term_counts),
        top_terms=tuple(top),
    )


def stats_to_json(stats: CorpusStats) -> dict:
    return {
        "doc_count": stats.doc_count,
        "analyzer": stats.analyzer_id,
        "field_token_counts": stats.field_token_counts,
        "vocabulary_size": stats.vocabulary_size,
        "top_terms": [{"term": t, "count": c} for t, c in stats.top_terms],
    }


def render_stats(stats: CorpusStats) -> str:
    lines = [
        f"documents          {stats.doc_count}",
        f"analyzer           {stats.analyzer_id}",
        f"vocabulary size    {stats.vocabulary_size}",
    ]
    for fname in DOCUMENT_FIELDS:
        lines.append(f"tokens in {fname:<9}{stats.field_token_counts.get(fname, 0)}")
    if stats.top_terms:
        lines.append("top terms")
        for term, count in stats.top_terms:
            lines.append(f"  {term:<20}{count}")
    return "\n".join(lines) + "\n"
