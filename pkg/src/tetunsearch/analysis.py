"""Tetun text-analysis pipeline.

Raw document or query text is turned into index terms by up to eight stages,
applied in a fixed order:

    strip_html -> fold_case -> tokenize -> normalize -> remove stopwords
    -> expand abbreviations -> expand synonyms -> stem

Stopword removal runs before the expansion stages so stopwords are never
expanded, and stemming runs last so expansion-emitted terms are stemmed too.
Each stage can be switched off independently (a disabled stage is the
identity), with one constraint: tokenization cannot be disabled while any
token-level stage downstream of it is enabled.

Three named presets cover the experiment grid: ``default`` (all stages on),
``with_stopwords`` (stopword removal off), ``without_stemming`` (stemming
off).

All functions are pure; once a :class:`~tetunsearch.lexicons.Lexicons` is
loaded, the pipeline is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from html.parser import HTMLParser
from io import StringIO
from typing import Iterable

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .lexicons import Lexicons, load_lexicons

__all__ = [
    "AnalyzerConfig",
    "Token",
    "PRESETS",
    "PRESET_NAMES",
    "analyze",
    "analyze_terms",
    "strip_html",
    "fold_case",
    "tokenize",
    "normalize_term",
    "expand_abbreviation",
    "expand_synonyms",
    "remove_stopwords",
    "stem",
    "TetunAnalyzer",
]

_FLAGS = (
    "html_removal",
    "case_folding",
    "tokenization",
    "text_normalization",
    "stopword_removal",
    "abbreviation_expansion",
    "synonym_expansion",
    "light_stemming",
)

# Stages that operate on tokens and therefore require tokenization.
_TOKEN_STAGES = (
    "text_normalization",
    "stopword_removal",
    "abbreviation_expansion",
    "synonym_expansion",
    "light_stemming",
)


@dataclass(frozen=True)
class AnalyzerConfig:
    """Which pipeline stages run."""

    html_removal: bool = True
    case_folding: bool = True
    tokenization: bool = True
    text_normalization: bool = True
    stopword_removal: bool = True
    abbreviation_expansion: bool = True
    synonym_expansion: bool = True
    light_stemming: bool = True

    def __post_init__(self) -> None:
        if not self.tokenization:
            enabled = [s for s in _TOKEN_STAGES if getattr(self, s)]
            if enabled:
                raise ValueError(
                    "tokenization cannot be disabled while token-level stages "
                    f"are enabled: {', '.join(enabled)}"
                )

    @property
    def id(self) -> str:
        """Stable identifier: the preset name, or a flag signature."""
        for name, preset in PRESETS.items():
            if preset == self:
                return name
        bits = "".join("1" if getattr(self, f) else "0" for f in _FLAGS)
        return f"custom-{bits}"

    def flag_bits(self) -> int:
        bits = 0
        for i, f in enumerate(_FLAGS):
            if getattr(self, f):
                bits |= 1 << i
        return bits

    @classmethod
    def from_flag_bits(cls, bits: int) -> "AnalyzerConfig":
        return cls(**{f: bool(bits & (1 << i)) for i, f in enumerate(_FLAGS)})


PRESETS: dict[str, AnalyzerConfig] = {
    "default": AnalyzerConfig(),
    "with_stopwords": AnalyzerConfig(stopword_removal=False),
    "without_stemming": AnalyzerConfig(light_stemming=False),
}
PRESET_NAMES = tuple(PRESETS)


def preset(name: str) -> AnalyzerConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}") from None


@dataclass(frozen=True)
class Token:
    """An index term plus the ordinal of the source token it came from.

    Expansion stages emit extra tokens carrying their source token's
    position, so positions are non-decreasing in general and strictly
    increasing when no expansion stage emitted anything.
    """

    text: str
    position: int


class _TextExtractor(HTMLParser):
    """Collects character data, dropping script/style content."""

    _SKIP = {"script", "style"}

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self._out = StringIO()
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data):
        if not self._skip_depth:
            # Tag boundaries act as separators so adjacent elements never
            # glue together.
            self._out.write(data)
            self._out.write(" ")

    def text(self) -> str:
        return self._out.getvalue()


def strip_html(raw: str) -> str:
    """Remove markup and resolve HTML entities; collapse whitespace.

    Malformed markup is stripped best-effort; this never raises.
    """
    if "<" not in raw and "&" not in raw:
        return " ".join(raw.split())
    extractor = _TextExtractor()
    try:
        extractor.feed(raw)
        extractor.close()
    except Exception:
        pass
    return " ".join(extractor.text().split())


def fold_case(text: str) -> str:
    """Unicode-aware lowercasing; also unifies the typographic apostrophe."""
    return text.replace("’", "'").lower()


# A token is a run of letters/digits; apostrophes and hyphens are kept when
# they sit between two such runs (ha'u, nauk-teen).
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’-][^\W_]+)*")


def tokenize(text: str) -> list[Token]:
    """Split on whitespace/punctuation, keeping word-internal ' and -."""
    return [Token(m.group(), i) for i, m in enumerate(_TOKEN_RE.finditer(text))]


def normalize_term(term: str, rules: dict[str, str]) -> str:
    """Map a known variant spelling to its canonical form."""
    return rules.get(term, term)


def expand_abbreviation(term: str, rules: dict[str, tuple[str, ...]]) -> list[str]:
    """Emit the expansion terms after a registered abbreviation."""
    expansion = rules.get(term)
    return [term, *expansion] if expansion else [term]


def expand_synonyms(term: str, rules: dict[str, tuple[str, ...]]) -> list[str]:
    """Emit all equivalent terms after a term with a synonym entry."""
    members = rules.get(term)
    return [term, *members] if members else [term]


def remove_stopwords(tokens: list[Token], stopwords: frozenset[str]) -> list[Token]:
    """Drop stopword tokens; surviving tokens keep their positions."""
    return [t for t in tokens if t.text not in stopwords]


def stem(term: str, suffixes: tuple[tuple[str, int], ...]) -> str:
    """Strip the longest matching suffix if enough stem remains.

    At most one suffix is stripped; a hyphen immediately before the suffix
    is consumed with it. Never returns an empty string and never lengthens
    the term.
    """
    best: tuple[str, int] | None = None
    for suffix, min_len in suffixes:
        if len(term) > len(suffix) and term.endswith(suffix):
            if best is None or len(suffix) > len(best[0]):
                best = (suffix, min_len)
    if best is None:
        return term
    suffix, min_len = best
    remainder = term[: -len(suffix)]
    if remainder.endswith("-"):
        remainder = remainder[:-1]
    if len(remainder) >= max(min_len, 1):
        return remainder
    return term


def _expansion_stage(tokens, expander, rules):
    out = []
    for token in tokens:
        for text in expander(token.text, rules):
            out.append(Token(text, token.position))
    return out


def analyze(text: str, config: AnalyzerConfig, lexicons: Lexicons) -> list[Token]:
    """Run the enabled pipeline stages over ``text`` in fixed order."""
    if config.html_removal:
        text = strip_html(text)
    if config.case_folding:
        text = fold_case(text)
    if config.tokenization:
        tokens = tokenize(text)
    else:
        stripped = text.strip()
        tokens = [Token(stripped, 0)] if stripped else []
    if config.text_normalization:
        tokens = [Token(normalize_term(t.text, lexicons.normalization), t.position) for t in tokens]
    if config.stopword_removal:
        tokens = remove_stopwords(tokens, lexicons.stopwords)
    if config.abbreviation_expansion:
        tokens = _expansion_stage(tokens, expand_abbreviation, lexicons.abbreviations)
    if config.synonym_expansion:
        tokens = _expansion_stage(tokens, expand_synonyms, lexicons.synonyms)
    if config.light_stemming:
        tokens = [Token(stem(t.text, lexicons.stemmer_suffixes), t.position) for t in tokens]
    return tokens


def analyze_terms(text: str, config: AnalyzerConfig, lexicons: Lexicons) -> list[str]:
    """Like :func:`analyze` but returns just the term strings."""
    return [t.text for t in analyze(text, config, lexicons)]


class TetunAnalyzer(TransformerMixin, BaseEstimator):
    """The analysis pipeline as a scikit-learn style transformer.

    ``transform`` maps an iterable of raw strings to lists of index terms,
    so the analyzer drops into sklearn pipelines or anything expecting the
    fit/transform protocol. Stage flags are constructor parameters and
    participate in ``get_params``/``set_params``.

    >>> TetunAnalyzer().fit().transform(["Selebrasaun iha junho"])
    [['selebra', 'iha', 'juñu']]
    """

    def __init__(
        self,
        html_removal: bool = True,
        case_folding: bool = True,
        tokenization: bool = True,
        text_normalization: bool = True,
        stopword_removal: bool = True,
        abbreviation_expansion: bool = True,
        synonym_expansion: bool = True,
        light_stemming: bool = True,
        lexicon_dir: str | None = None,
    ):
        self.html_removal = html_removal
        self.case_folding = case_folding
        self.tokenization = tokenization
        self.text_normalization = text_normalization
        self.stopword_removal = stopword_removal
        self.abbreviation_expansion = abbreviation_expansion
        self.synonym_expansion = synonym_expansion
        self.light_stemming = light_stemming
        self.lexicon_dir = lexicon_dir

    @classmethod
    def from_preset(cls, name: str, lexicon_dir: str | None = None) -> "TetunAnalyzer":
        config = preset(name)
        return cls(**{f: getattr(config, f) for f in _FLAGS}, lexicon_dir=lexicon_dir)

    def fit(self, X: Iterable[str] | None = None, y=None) -> "TetunAnalyzer":
        """Validate the stage flags and load lexicons; X is ignored."""
        self.config_ = AnalyzerConfig(**{f: getattr(self, f) for f in _FLAGS})
        self.lexicons_ = load_lexicons(self.lexicon_dir)
        return self

    def analyze(self, text: str) -> list[Token]:
        check_is_fitted(self, "config_")
        return analyze(text, self.config_, self.lexicons_)

    def transform(self, X: Iterable[str]) -> list[list[str]]:
        check_is_fitted(self, "config_")
        if isinstance(X, str):
            raise TypeError("expected an iterable of strings, got a single string")
        return [analyze_terms(text, self.config_, self.lexicons_) for text in X]
