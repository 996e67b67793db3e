"""Bit-exact TREC run and qrels file formats.

Run lines:   ``qid Q0 docid rank score run_tag`` (score with 6 decimals)
Qrels lines: ``qid 0 docid grade``

Both are single-space separated, newline-terminated, UTF-8. Writers sort
deterministically (runs by qid then rank, qrels by qid then docid); parsers
are strict and report 1-based line numbers.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import TrecParseError


@dataclass(frozen=True)
class RunEntry:
    qid: str
    docid: str
    rank: int
    score: float
    run_tag: str


@dataclass(frozen=True)
class QrelsEntry:
    qid: str
    docid: str
    grade: int


def format_run_line(entry: RunEntry) -> str:
    return f"{entry.qid} Q0 {entry.docid} {entry.rank} {entry.score:.6f} {entry.run_tag}\n"


def format_qrels_line(entry: QrelsEntry) -> str:
    return f"{entry.qid} 0 {entry.docid} {entry.grade}\n"


def validate_run(entries: Sequence[RunEntry]) -> None:
    """Per (run_tag, qid): ranks contiguous from 1, scores non-increasing,
    docids unique. Raises ValueError on violation."""
    groups: dict[tuple[str, str], list[RunEntry]] = {}
    for e in entries:
        groups.setdefault((e.run_tag, e.qid), []).append(e)
    for (tag, qid), group in groups.items():
        group = sorted(group, key=lambda e: e.rank)
        seen_docs: set[str] = set()
        prev_score = None
        for i, e in enumerate(group, start=1):
            if e.rank != i:
                raise ValueError(f"run {tag!r} qid {qid!r}: ranks not contiguous at {e.rank} (expected {i})")
            if e.docid in seen_docs:
                raise ValueError(f"run {tag!r} qid {qid!r}: duplicate docid {e.docid!r}")
            if prev_score is not None and e.score > prev_score:
                raise ValueError(f"run {tag!r} qid {qid!r}: score increases at rank {e.rank}")
            seen_docs.add(e.docid)
            prev_score = e.score
    return None


def write_run(entries: Sequence[RunEntry], path: str | Path) -> None:
    """Atomically write a run file (sorted by qid, then rank)."""
    validate_run(entries)
    ordered = sorted(entries, key=lambda e: (e.qid, e.rank))
    _atomic_write(Path(path), "".join(format_run_line(e) for e in ordered))


def read_run(path: str | Path) -> list[RunEntry]:
    """Parse a run file; re-sorts by (qid, rank) so line order is irrelevant."""
    path = Path(path)
    entries = []
    for line_no, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise TrecParseError(str(path), line_no, f"expected 6 fields, got {len(parts)}")
        qid, _q0, docid, rank_s, score_s, tag = parts
        try:
            rank = int(rank_s)
            score = float(score_s)
        except ValueError:
            raise TrecParseError(str(path), line_no, f"bad rank/score: {rank_s!r} {score_s!r}") from None
        if rank < 1:
            raise TrecParseError(str(path), line_no, f"rank must be >= 1, got {rank}")
        entries.append(RunEntry(qid, docid, rank, score, tag))
    entries.sort(key=lambda e: (e.qid, e.rank))
    try:
        validate_run(entries)
    except ValueError as e:
        raise TrecParseError(str(path), 0, str(e)) from None
    return entries


def write_qrels(entries: Sequence[QrelsEntry], path: str | Path) -> None:
    """Write a qrels file sorted by qid then docid."""
    ordered = sorted(entries, key=lambda e: (e.qid, e.docid))
    _atomic_write(Path(path), "".join(format_qrels_line(e) for e in ordered))


def read_qrels(path: str | Path) -> list[QrelsEntry]:
    path = Path(path)
    entries = []
    seen: dict[tuple[str, str], int] = {}
    for line_no, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise TrecParseError(str(path), line_no, f"expected 4 fields, got {len(parts)}")
        qid, _iter, docid, grade_s = parts
        try:
            grade = int(grade_s)
        except ValueError:
            raise TrecParseError(str(path), line_no, f"bad grade {grade_s!r}") from None
        if not 0 <= grade <= 3:
            raise TrecParseError(str(path), line_no, f"grade out of range 0..3: {grade}")
        key = (qid, docid)
        if key in seen:
            raise TrecParseError(str(path), line_no, f"duplicate (qid, docid) pair {key!r} (first on line {seen[key]})")
        seen[key] = line_no
        entries.append(QrelsEntry(qid, docid, grade))
    return entries


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def group_by_qid(entries: Iterable) -> dict[str, list]:
    groups: dict[str, list] = {}
    for e in entries:
        groups.setdefault(e.qid, []).append(e)
    return groups
