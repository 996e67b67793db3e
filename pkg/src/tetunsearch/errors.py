"""Exception hierarchy shared across the package."""

from __future__ import annotations


class TetunSearchError(Exception):
    """Base class for all package errors."""


class DataError(TetunSearchError):
    """Invalid input data (corpus, topics, run/qrels files, lexicons)."""


class CorpusError(DataError):
    """Corpus or topics file rejected; carries per-line diagnostics."""

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        self.diagnostics = diagnostics or []
        if self.diagnostics:
            message = message + "\n" + "\n".join(self.diagnostics)
        super().__init__(message)


class LexiconError(DataError):
    """Malformed lexicon file."""


class TrecParseError(DataError):
    """Malformed TREC run/qrels line; carries the 1-based line number."""

    def __init__(self, path: str, line_no: int, message: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class IndexFormatError(DataError):
    """Unreadable or corrupt index file; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at byte offset {offset})")


class IndexVersionError(IndexFormatError):
    """Index file written by an unsupported format version."""
