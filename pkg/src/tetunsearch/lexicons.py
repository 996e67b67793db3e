"""Lexicon resources: stopwords, normalization, expansions, stemmer rules.

All five files are UTF-8 plain text with ``#`` comment lines, so the rule
lists can grow without code changes:

* ``stopwords.txt``       one term per line
* ``normalization.tsv``   variant<TAB>canonical
* ``abbreviations.tsv``   abbr<TAB>expansion phrase
* ``synonyms.tsv``        term<TAB>comma-separated equivalents
* ``stemmer.tsv``         suffix<TAB>minimum remaining stem length

A bundled default set ships with the package and is used when no directory
is given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import LexiconError

# News text mixes the typographic apostrophe into ne'e/ha'u style words;
# lexicon entries are stored with the ASCII one.
_APOSTROPHES = str.maketrans({"’": "'"})

STOPWORDS_FILE = "stopwords.txt"
NORMALIZATION_FILE = "normalization.tsv"
ABBREVIATIONS_FILE = "abbreviations.tsv"
SYNONYMS_FILE = "synonyms.tsv"
STEMMER_FILE = "stemmer.tsv"


@dataclass(frozen=True)
class Lexicons:
    """Immutable rule sets consumed by the analysis pipeline."""

    stopwords: frozenset[str] = frozenset()
    normalization: dict[str, str] = field(default_factory=dict)
    abbreviations: dict[str, tuple[str, ...]] = field(default_factory=dict)
    synonyms: dict[str, tuple[str, ...]] = field(default_factory=dict)
    stemmer_suffixes: tuple[tuple[str, int], ...] = ()


def _canonical(term: str) -> str:
    return term.strip().translate(_APOSTROPHES).lower()


def _data_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines


def _split_tsv(line: str, filename: str) -> tuple[str, str]:
    parts = line.split("\t")
    if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
        raise LexiconError(f"{filename}: expected 'key<TAB>value', got {line!r}")
    return parts[0], parts[1]


def parse_stopwords(text: str) -> frozenset[str]:
    return frozenset(_canonical(line) for line in _data_lines(text))


def parse_normalization(text: str) -> dict[str, str]:
    rules: dict[str, str] = {}
    for line in _data_lines(text):
        variant, canonical = _split_tsv(line, NORMALIZATION_FILE)
        rules[_canonical(variant)] = _canonical(canonical)
    # Canonical forms must be fixed points, otherwise normalize() would not
    # be idempotent.
    for canonical in rules.values():
        if rules.get(canonical, canonical) != canonical:
            raise LexiconError(
                f"{NORMALIZATION_FILE}: canonical form {canonical!r} is itself "
                f"mapped to {rules[canonical]!r}"
            )
    return rules


def parse_abbreviations(text: str) -> dict[str, tuple[str, ...]]:
    rules: dict[str, tuple[str, ...]] = {}
    for line in _data_lines(text):
        abbr, expansion = _split_tsv(line, ABBREVIATIONS_FILE)
        terms = tuple(_canonical(t) for t in expansion.split())
        if not terms:
            raise LexiconError(f"{ABBREVIATIONS_FILE}: empty expansion for {abbr!r}")
        rules[_canonical(abbr)] = terms
    return rules


def parse_synonyms(text: str) -> dict[str, tuple[str, ...]]:
    rules: dict[str, tuple[str, ...]] = {}
    for line in _data_lines(text):
        term, equivalents = _split_tsv(line, SYNONYMS_FILE)
        key = _canonical(term)
        members = sorted({_canonical(t) for t in equivalents.split(",") if t.strip()} - {key})
        if not members:
            raise LexiconError(f"{SYNONYMS_FILE}: empty synonym set for {term!r}")
        rules[key] = tuple(members)
    return rules


def parse_stemmer_rules(text: str) -> tuple[tuple[str, int], ...]:
    rules = []
    for line in _data_lines(text):
        suffix, min_len = _split_tsv(line, STEMMER_FILE)
        try:
            n = int(min_len)
        except ValueError:
            raise LexiconError(f"{STEMMER_FILE}: bad minimum stem length {min_len!r}") from None
        if n < 1:
            raise LexiconError(f"{STEMMER_FILE}: minimum stem length must be >= 1, got {n}")
        rules.append((_canonical(suffix), n))
    return tuple(rules)


_PARSERS = {
    STOPWORDS_FILE: parse_stopwords,
    NORMALIZATION_FILE: parse_normalization,
    ABBREVIATIONS_FILE: parse_abbreviations,
    SYNONYMS_FILE: parse_synonyms,
    STEMMER_FILE: parse_stemmer_rules,
}


def _read_bundled(filename: str) -> str:
    return resources.files("tetunsearch").joinpath("data/lexicons").joinpath(filename).read_text("utf-8")


def load_lexicons(directory: str | Path | None = None) -> Lexicons:
    """Load all five lexicon files from ``directory`` (bundled set if None).

    Missing files in a custom directory fall back to empty rule sets so a
    user can override just one list.
    """
    parsed = {}
    for filename, parser in _PARSERS.items():
        if directory is None:
            text = _read_bundled(filename)
        else:
            path = Path(directory) / filename
            text = path.read_text("utf-8") if path.exists() else ""
        parsed[filename] = parser(text)
    return Lexicons(
        stopwords=parsed[STOPWORDS_FILE],
        normalization=parsed[NORMALIZATION_FILE],
        abbreviations=parsed[ABBREVIATIONS_FILE],
        synonyms=parsed[SYNONYMS_FILE],
        stemmer_suffixes=parsed[STEMMER_FILE],
    )


def judging_guidelines() -> str:
    """The relevance-scale guideline text shown to evaluators."""
    return resources.files("tetunsearch").joinpath("data/judging_guidelines.txt").read_text("utf-8")


def bundled_topics_path() -> Path:
    """Filesystem path of the bundled topics.tsv."""
    return Path(str(resources.files("tetunsearch").joinpath("data/topics.tsv")))
