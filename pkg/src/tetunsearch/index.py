"""Inverted index over one field scheme, with versioned binary persistence.

A field scheme selects which document parts are analyzed and indexed as one
concatenated stream: T, T+C, L+C, or T+L+C (title, lead, content order).

The on-disk format is sectioned and fully sorted, so rebuilding the same
corpus yields byte-identical files:

    magic "TTIX" | u16 version | u8 config flags | analyzer id | scheme
    | doc table (docid, length)* sorted by docid
    | term table (term, df, delta-encoded postings)* sorted by term

Integers are unsigned LEB128 varints; strings are varint-length-prefixed
UTF-8. Posting doc references are gaps between indices into the doc table.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .analysis import AnalyzerConfig, analyze_terms
from .corpus import Document
from .errors import IndexFormatError, IndexVersionError
from .lexicons import Lexicons
from .validation import check_documents

MAGIC = b"TTIX"
FORMAT_VERSION = 1

FIELD_SCHEMES = ("T", "T+C", "L+C", "T+L+C")
_SCHEME_FIELDS = {
    "T": ("title",),
    "T+C": ("title", "content"),
    "L+C": ("lead", "content"),
    "T+L+C": ("title", "lead", "content"),
}


def scheme_fields(scheme: str) -> tuple[str, ...]:
    try:
        return _SCHEME_FIELDS[scheme]
    except KeyError:
        raise ValueError(f"unknown field scheme {scheme!r}; expected one of {', '.join(FIELD_SCHEMES)}") from None


@dataclass
class InvertedIndex:
    """Immutable after build/load; safe for concurrent readers."""

    scheme: str
    config: AnalyzerConfig
    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    doc_lengths: dict[str, int] = field(default_factory=dict)

    @property
    def analyzer_id(self) -> str:
        return self.config.id

    @property
    def doc_count(self) -> int:
        return len(self.doc_lengths)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths.values()) / len(self.doc_lengths)

    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.postings)

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return (
            self.scheme == other.scheme
            and self.config == other.config
            and self.doc_lengths == other.doc_lengths
            and self.postings == other.postings
        )

    def validate(self) -> None:
        """Check the structural invariants; raises ValueError on violation."""
        totals = {d: 0 for d in self.doc_lengths}
        for term, plist in self.postings.items():
            for docid, tf in plist:
                if tf < 1:
                    raise ValueError(f"term {term!r}: non-positive tf for doc {docid!r}")
                if docid not in self.doc_lengths:
                    raise ValueError(f"term {term!r}: posting references unknown doc {docid!r}")
                totals[docid] += tf
        for docid, total in totals.items():
            if total != self.doc_lengths[docid]:
                raise ValueError(
                    f"doc {docid!r}: postings sum to {total}, stored length is {self.doc_lengths[docid]}"
                )


def document_terms(doc: Document, scheme: str, config: AnalyzerConfig, lexicons: Lexicons) -> list[str]:
    """Analyzed term stream for one document under a field scheme."""
    text = "\n".join(getattr(doc, f) for f in scheme_fields(scheme))
    return analyze_terms(text, config, lexicons)


def build_index(
    corpus: Iterable[Document],
    scheme: str,
    config: AnalyzerConfig,
    lexicons: Lexicons,
) -> InvertedIndex:
    """Analyze and index a corpus; rejects empty corpora and duplicate ids."""
    docs = check_documents(corpus)
    scheme_fields(scheme)
    postings: dict[str, dict[str, int]] = {}
    doc_lengths: dict[str, int] = {}
    for doc in docs:
        terms = document_terms(doc, scheme, config, lexicons)
        doc_lengths[doc.id] = len(terms)
        for term in terms:
            by_doc = postings.setdefault(term, {})
            by_doc[doc.id] = by_doc.get(doc.id, 0) + 1
    index = InvertedIndex(
        scheme=scheme,
        config=config,
        postings={t: sorted(by_doc.items()) for t, by_doc in sorted(postings.items())},
        doc_lengths=doc_lengths,
    )
    index.validate()
    return index


def term_stats(index: InvertedIndex, term: str) -> tuple[int, int]:
    """(document frequency, total term frequency); (0, 0) for unseen terms."""
    plist = index.postings.get(term)
    if not plist:
        return (0, 0)
    return (len(plist), sum(tf for _, tf in plist))


# -- binary serialization -----------------------------------------------

def _write_varint(buf: io.BytesIO, value: int) -> None:
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            buf.write(bytes((byte | 0x80,)))
        else:
            buf.write(bytes((byte,)))
            return


def _write_str(buf: io.BytesIO, s: str) -> None:
    data = s.encode("utf-8")
    _write_varint(buf, len(data))
    buf.write(data)


class _Reader:
    """Tracks the byte offset so corruption errors can point at it."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, n: int) -> bytes:
        if self.offset + n > len(self.data):
            raise IndexFormatError("truncated index file", self.offset)
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def varint(self) -> int:
        value = 0
        shift = 0
        while True:
            byte = self.take(1)[0]
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value
            shift += 7
            if shift > 63:
                raise IndexFormatError("varint overflow", self.offset)

    def string(self) -> str:
        length = self.varint()
        start = self.offset
        try:
            return self.take(length).decode("utf-8")
        except UnicodeDecodeError:
            raise IndexFormatError("invalid UTF-8 in string", start) from None


def index_to_bytes(index: InvertedIndex) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<H", FORMAT_VERSION))
    buf.write(struct.pack("<B", index.config.flag_bits()))
    _write_str(buf, index.analyzer_id)
    _write_str(buf, index.scheme)
    docids = sorted(index.doc_lengths)
    doc_pos = {d: i for i, d in enumerate(docids)}
    _write_varint(buf, len(docids))
    for docid in docids:
        _write_str(buf, docid)
        _write_varint(buf, index.doc_lengths[docid])
    _write_varint(buf, len(index.postings))
    for term in sorted(index.postings):
        plist = sorted(index.postings[term], key=lambda p: doc_pos[p[0]])
        _write_str(buf, term)
        _write_varint(buf, len(plist))
        prev = -1
        for docid, tf in plist:
            pos = doc_pos[docid]
            _write_varint(buf, pos - prev)
            _write_varint(buf, tf)
            prev = pos
    return buf.getvalue()


def index_from_bytes(data: bytes) -> InvertedIndex:
    r = _Reader(data)
    if r.take(len(MAGIC)) != MAGIC:
        raise IndexFormatError("not an index file (bad magic)", 0)
    (version,) = struct.unpack("<H", r.take(2))
    if version != FORMAT_VERSION:
        raise IndexVersionError(
            f"unsupported index format version {version} (supported: {FORMAT_VERSION})",
            r.offset - 2,
        )
    (flag_bits,) = struct.unpack("<B", r.take(1))
    config = AnalyzerConfig.from_flag_bits(flag_bits)
    analyzer_id = r.string()
    if config.id != analyzer_id and not analyzer_id.startswith("custom-"):
        raise IndexFormatError(f"analyzer id {analyzer_id!r} does not match stored flags", r.offset)
    scheme = r.string()
    if scheme not in _SCHEME_FIELDS:
        raise IndexFormatError(f"unknown field scheme {scheme!r}", r.offset)
    n_docs = r.varint()
    docids: list[str] = []
    doc_lengths: dict[str, int] = {}
    for _ in range(n_docs):
        docid = r.string()
        doc_lengths[docid] = r.varint()
        docids.append(docid)
    n_terms = r.varint()
    postings: dict[str, list[tuple[str, int]]] = {}
    for _ in range(n_terms):
        term = r.string()
        df = r.varint()
        plist = []
        prev = -1
        for _ in range(df):
            gap = r.varint()
            tf = r.varint()
            pos = prev + gap
            if gap < 1 or pos >= len(docids):
                raise IndexFormatError(f"posting for term {term!r} references a bad doc slot", r.offset)
            plist.append((docids[pos], tf))
            prev = pos
        postings[term] = sorted(plist)
    if r.offset != len(data):
        raise IndexFormatError("trailing bytes after index payload", r.offset)
    index = InvertedIndex(scheme=scheme, config=config, postings=postings, doc_lengths=doc_lengths)
    try:
        index.validate()
    except ValueError as e:
        raise IndexFormatError(f"inconsistent index payload: {e}", r.offset) from None
    return index


def save_index(index: InvertedIndex, path: str | Path) -> None:
    Path(path).write_bytes(index_to_bytes(index))


def load_index(path: str | Path) -> InvertedIndex:
    return index_from_bytes(Path(path).read_bytes())
