"""BM25 ranking and the preset-by-scheme experiment grid.

Classic BM25 with k1=1.2, b=0.75:

    score(D, Q) = sum over q in Q of
        idf(q) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(D) / avglen))
    idf(q) = ln(1 + (N - df + 0.5) / (df + 0.5))

Repeated query terms contribute once per occurrence. Ties break by
ascending docid; zero-score documents are never returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .analysis import AnalyzerConfig, PRESET_NAMES, analyze_terms, preset
from .corpus import Document, Query
from .errors import DataError
from .index import FIELD_SCHEMES, InvertedIndex, build_index
from .lexicons import Lexicons, load_lexicons
from .trec import RunEntry, write_run
from .validation import check_positive_int, check_topics

K1_DEFAULT = 1.2
B_DEFAULT = 0.75
DEFAULT_DEPTH = 30


def idf(doc_count: int, doc_freq: int) -> float:
    return math.log(1.0 + (doc_count - doc_freq + 0.5) / (doc_freq + 0.5))


def score_bm25(
    index: InvertedIndex,
    query_terms: Sequence[str],
    docid: str,
    k1: float = K1_DEFAULT,
    b: float = B_DEFAULT,
) -> float:
    """BM25 score of one indexed document for pre-analyzed query terms."""
    if docid not in index.doc_lengths:
        raise ValueError(f"unknown docid {docid!r}")
    n = index.doc_count
    avglen = index.avg_doc_length
    length = index.doc_lengths[docid]
    score = 0.0
    for term in query_terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        tf = 0
        for d, f in plist:
            if d == docid:
                tf = f
                break
        if tf == 0:
            continue
        norm = tf + k1 * (1.0 - b + b * length / avglen)
        score += idf(n, len(plist)) * tf * (k1 + 1.0) / norm
    return score


def _score_all(index: InvertedIndex, query_terms: Sequence[str], k1: float, b: float) -> dict[str, float]:
    n = index.doc_count
    avglen = index.avg_doc_length
    scores: dict[str, float] = {}
    for term in query_terms:
        plist = index.postings.get(term)
        if not plist:
            continue
        term_idf = idf(n, len(plist))
        for docid, tf in plist:
            norm = tf + k1 * (1.0 - b + b * index.doc_lengths[docid] / avglen)
            scores[docid] = scores.get(docid, 0.0) + term_idf * tf * (k1 + 1.0) / norm
    return scores


@dataclass(frozen=True)
class SearchResult:
    """Ranked entries plus a flag distinguishing the empty-query outcome."""

    qid: str
    entries: tuple[RunEntry, ...]
    empty_query: bool = False


def search(
    index: InvertedIndex,
    query: Query,
    config: AnalyzerConfig,
    lexicons: Lexicons,
    k: int = DEFAULT_DEPTH,
    k1: float = K1_DEFAULT,
    b: float = B_DEFAULT,
    run_tag: str | None = None,
) -> SearchResult:
    """Top-k documents by BM25, descending; ascending-docid tie-break.

    The query must be analyzed with the same config the index was built
    with, so the config is taken as an argument rather than trusted from
    the caller's preset name.
    """
    check_positive_int("k", k)
    if config != index.config:
        raise ValueError(
            f"query config {config.id!r} does not match index config {index.config.id!r}"
        )
    if run_tag is None:
        run_tag = f"{index.analyzer_id}_{index.scheme}"
    terms = analyze_terms(query.text, config, lexicons)
    if not terms:
        return SearchResult(qid=query.qid, entries=(), empty_query=True)
    scores = _score_all(index, terms, k1, b)
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    entries = tuple(
        RunEntry(qid=query.qid, docid=docid, rank=i, score=score, run_tag=run_tag)
        for i, (docid, score) in enumerate(ranked, start=1)
    )
    return SearchResult(qid=query.qid, entries=entries)


@dataclass(frozen=True)
class StrategyGrid:
    """The experiment grid: analyzer presets crossed with field schemes."""

    presets: tuple[str, ...] = PRESET_NAMES
    schemes: tuple[str, ...] = FIELD_SCHEMES
    depth: int = DEFAULT_DEPTH

    def __post_init__(self) -> None:
        check_positive_int("depth", self.depth)
        for name in self.presets:
            preset(name)
        for scheme in self.schemes:
            if scheme not in FIELD_SCHEMES:
                raise ValueError(f"unknown field scheme {scheme!r}")

    def run_tags(self) -> list[str]:
        return [f"{p}_{s}" for p in self.presets for s in self.schemes]


@dataclass(frozen=True)
class GridRun:
    """One strategy's output: the tag and its run entries."""

    run_tag: str
    preset: str
    scheme: str
    entries: tuple[RunEntry, ...] = ()
    empty_query_qids: tuple[str, ...] = ()


def run_grid(
    corpus: Sequence[Document],
    topics: Sequence[Query],
    grid: StrategyGrid,
    lexicons: Lexicons,
    k1: float = K1_DEFAULT,
    b: float = B_DEFAULT,
) -> list[GridRun]:
    """Execute every (preset, scheme) strategy over the topic set."""
    topics = check_topics(topics)
    runs = []
    for preset_name in grid.presets:
        config = preset(preset_name)
        for scheme in grid.schemes:
            tag = f"{preset_name}_{scheme}"
            try:
                index = build_index(corpus, scheme, config, lexicons)
                entries: list[RunEntry] = []
                empty = []
                for query in topics:
                    result = search(index, query, config, lexicons, k=grid.depth, k1=k1, b=b, run_tag=tag)
                    if result.empty_query:
                        empty.append(query.qid)
                    entries.extend(result.entries)
            except DataError as e:
                raise type(e)(f"strategy {tag}: {e}") from e
            except ValueError as e:
                raise ValueError(f"strategy {tag}: {e}") from e
            runs.append(
                GridRun(run_tag=tag, preset=preset_name, scheme=scheme,
                        entries=tuple(entries), empty_query_qids=tuple(empty))
            )
    return runs


def write_grid_runs(runs: Sequence[GridRun], out_dir: str | Path) -> list[Path]:
    """Write one run file per strategy into ``out_dir`` (atomic, independent)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for run in runs:
        path = out_dir / f"{run.run_tag}.run"
        write_run(run.entries, path)
        paths.append(path)
    return paths


class Bm25Retriever(BaseEstimator):
    """BM25 retrieval as a scikit-learn style estimator.

    ``fit`` indexes a document collection; ``search`` ranks one query;
    ``transform`` maps query strings to ranked docid lists, which makes the
    retriever usable anywhere the fit/transform protocol is expected.
    """

    def __init__(
        self,
        scheme: str = "T+L+C",
        preset: str = "default",
        k: int = DEFAULT_DEPTH,
        k1: float = K1_DEFAULT,
        b: float = B_DEFAULT,
        lexicon_dir: str | None = None,
    ):
        self.scheme = scheme
        self.preset = preset
        self.k = k
        self.k1 = k1
        self.b = b
        self.lexicon_dir = lexicon_dir

    def fit(self, X: Sequence[Document], y=None) -> "Bm25Retriever":
        config = preset(self.preset)
        check_positive_int("k", self.k)
        self.lexicons_ = load_lexicons(self.lexicon_dir)
        self.index_ = build_index(X, self.scheme, config, self.lexicons_)
        return self

    def search(self, text: str, qid: str = "q0", k: int | None = None) -> SearchResult:
        check_is_fitted(self, "index_")
        return search(
            self.index_,
            Query(qid=qid, text=text),
            self.index_.config,
            self.lexicons_,
            k=k if k is not None else self.k,
            k1=self.k1,
            b=self.b,
        )

    def transform(self, X: Sequence[str]) -> list[list[str]]:
        check_is_fitted(self, "index_")
        if isinstance(X, str):
            raise TypeError("expected an iterable of query strings, got a single string")
        return [[e.docid for e in self.search(text).entries] for text in X]
