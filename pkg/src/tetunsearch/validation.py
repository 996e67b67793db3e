"""Input-validation helpers shared by estimators and loaders."""

from __future__ import annotations

from typing import Iterable, Sequence

from .corpus import Document, Query
from .errors import CorpusError


def check_documents(X: Iterable) -> list[Document]:
    """Coerce/validate a document collection: dicts become Documents,
    ids must be non-empty and unique, titles non-empty."""
    docs: list[Document] = []
    for item in X:
        if isinstance(item, Document):
            docs.append(item)
        elif isinstance(item, dict):
            docs.append(Document(**item))
        else:
            raise TypeError(f"expected Document or dict, got {type(item).__name__}")
    if not docs:
        raise CorpusError("empty corpus")
    seen: set[str] = set()
    for doc in docs:
        if not doc.id:
            raise CorpusError("document with empty id")
        if doc.id in seen:
            raise CorpusError(f"duplicate document id {doc.id!r}")
        if not doc.title:
            raise CorpusError(f"document {doc.id!r} has an empty title")
        seen.add(doc.id)
    return docs


def check_topics(topics: Sequence[Query]) -> list[Query]:
    """Validate a topic set: non-empty, unique qids, non-empty text."""
    topics = list(topics)
    if not topics:
        raise CorpusError("empty topic set")
    seen: set[str] = set()
    for q in topics:
        if not q.qid:
            raise CorpusError("topic with empty qid")
        if q.qid in seen:
            raise CorpusError(f"duplicate qid {q.qid!r}")
        if not q.text.strip():
            raise CorpusError(f"topic {q.qid!r} has empty text")
        seen.add(q.qid)
    return topics


def check_positive_int(name: str, value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return value


def check_grade(grade: int) -> int:
    if not isinstance(grade, int) or isinstance(grade, bool) or not 0 <= grade <= 3:
        raise ValueError(f"relevance grade must be an integer in 0..3, got {grade!r}")
    return grade
