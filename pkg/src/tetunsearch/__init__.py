"""Tetun ad-hoc retrieval engine and TREC-style test-collection toolkit."""

from .analysis import (
    AnalyzerConfig,
    PRESET_NAMES,
    PRESETS,
    TetunAnalyzer,
    Token,
    analyze,
    analyze_terms,
)
from .collection import (
    Candidates,
    Judgment,
    Pool,
    adjudicate,
    export_qrels,
    majority_vote,
    pool_runs,
    select_judging_candidates,
)
from .corpus import CorpusStats, Document, Query, characterize, load_corpus, load_topics
from .errors import (
    CorpusError,
    DataError,
    IndexFormatError,
    IndexVersionError,
    LexiconError,
    TetunSearchError,
    TrecParseError,
)
from .evaluation import (
    EvalReport,
    average_precision,
    evaluate,
    ndcg,
    precision_at_k,
    render_matrix,
)
from .index import (
    FIELD_SCHEMES,
    InvertedIndex,
    build_index,
    load_index,
    save_index,
    term_stats,
)
from .lexicons import Lexicons, load_lexicons
from .retrieval import (
    Bm25Retriever,
    GridRun,
    SearchResult,
    StrategyGrid,
    run_grid,
    score_bm25,
    search,
)
from .synthetic import generate_corpus
from .trec import QrelsEntry, RunEntry, read_qrels, read_run, write_qrels, write_run

__version__ = "0.1.0"

__all__ = [
    "AnalyzerConfig",
    "Bm25Retriever",
    "Candidates",
    "CorpusError",
    "CorpusStats",
    "DataError",
    "Document",
    "EvalReport",
    "FIELD_SCHEMES",
    "GridRun",
    "IndexFormatError",
    "IndexVersionError",
    "InvertedIndex",
    "Judgment",
    "Lexicons",
    "LexiconError",
    "PRESETS",
    "PRESET_NAMES",
    "Pool",
    "QrelsEntry",
    "Query",
    "RunEntry",
    "SearchResult",
    "StrategyGrid",
    "TetunAnalyzer",
    "TetunSearchError",
    "Token",
    "TrecParseError",
    "adjudicate",
    "analyze",
    "analyze_terms",
    "average_precision",
    "build_index",
    "characterize",
    "evaluate",
    "export_qrels",
    "generate_corpus",
    "load_corpus",
    "load_index",
    "load_lexicons",
    "load_topics",
    "majority_vote",
    "ndcg",
    "pool_runs",
    "precision_at_k",
    "read_qrels",
    "read_run",
    "render_matrix",
    "run_grid",
    "save_index",
    "score_bm25",
    "search",
    "select_judging_candidates",
    "term_stats",
    "write_qrels",
    "write_run",
]
