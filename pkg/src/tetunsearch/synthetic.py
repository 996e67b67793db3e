"""Deterministic synthetic Tetun-like news corpus.

The real Timor News articles are private, so pipeline arithmetic (run
depths, pool sizes, judging counts) is exercised against a generated corpus
instead: 442 documents by default, drawn from a weighted Tetun-flavoured
vocabulary that deliberately includes stopwords, spelling variants,
abbreviations, synonym pairs, and words carrying every stemmer suffix.
Same seed, same bytes.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from .corpus import Document

DEFAULT_DOC_COUNT = 442
DEFAULT_SEED = 42

# (word, weight); weights shape a rough Zipf so queries over common news
# terms match plenty of titles.
_VOCAB: tuple[tuple[str, int], ...] = (
    ("governu", 10),
    ("timor-leste", 8),
    ("iha", 8),
    ("ba", 7),
    ("dili", 6),
    ("prezidente", 5),
    ("polísia", 5),
    ("eleisaun", 5),
    ("povu", 4),
    ("edukasaun", 4),
    ("merkadu", 4),
    ("orsamentu", 4),
    ("subsídiu", 4),
    ("funsionáriu", 4),
    ("opiniaun", 4),
    ("selebrasaun", 4),
    ("independénsia", 4),
    ("loron", 4),
    ("foun", 4),
    ("kaer", 3),
    ("aprova", 3),
    ("nasionál", 3),
    ("parlamentu", 3),
    ("ministru", 3),
    ("saúde", 3),
    ("eskola", 3),
    ("estudante", 3),
    ("komunidade", 3),
    ("serbisu", 3),
    ("osan", 3),
    ("uma", 3),
    ("rai", 3),
    ("públiku", 3),
    ("halo", 3),
    ("nauk-teen", 2),
    ("festa", 2),
    ("juramentu", 2),
    ("juñu", 2),
    ("lei", 2),
    ("justisa", 2),
    ("tribunál", 2),
    ("deputadu", 2),
    ("partidu", 2),
    ("seguransa", 2),
    ("agrikultura", 2),
    ("estrada", 2),
    ("bee", 2),
    ("feto", 2),
    ("joven", 2),
    ("labarik", 2),
    ("família", 2),
    ("futebol", 2),
    ("ekipa", 2),
    ("universidade", 2),
    ("ospitál", 2),
    ("moras", 2),
    ("munisípiu", 2),
    ("suku", 2),
    ("xefe", 2),
    ("lider", 2),
    ("vizita", 2),
    ("hahú", 2),
    ("anunsia", 2),
    ("deklara", 2),
    ("apoiu", 2),
    ("ajuda", 2),
    ("hamutuk", 2),
    ("millaun", 2),
    ("dolar", 2),
    ("pagamentu", 2),
    ("salariu", 2),
    ("desenvolvimentu", 2),
    ("investimentu", 2),
    ("konstrusaun", 2),
    ("formasaun", 2),
    ("informasaun", 2),
    ("organizasaun", 2),
    ("situasaun", 2),
    ("kultura", 2),
    ("igreja", 2),
    ("kafé", 2),
    ("pm", 2),
    ("pntl", 2),
    ("nauktén", 1),
    ("lohidór", 1),
    ("bosok-teen", 1),
    ("governadór", 1),
    ("jogadór", 1),
    ("treinadór", 1),
    ("junho", 1),
    ("junu", 1),
    ("subsidi", 1),
    ("funsionario", 1),
    ("publiko", 1),
    ("governo", 1),
    ("rdtl", 1),
    ("kak", 1),
    ("onu", 1),
    ("oms", 1),
    ("stae", 1),
    ("produsaun", 1),
    ("administrasaun", 1),
    ("deklarasaun", 1),
    ("populasaun", 1),
    ("kooperasaun", 1),
    ("akontesimentu", 1),
    ("tratamentu", 1),
    ("rekrutamentu", 1),
    ("veteranu", 1),
    ("ponte", 1),
    ("eletrisidade", 1),
    ("jogu", 1),
    ("profesór", 1),
    ("doutór", 1),
    ("médiku", 1),
    ("vasina", 1),
    ("udan", 1),
    ("aldeia", 1),
    ("remata", 1),
    ("organiza", 1),
    ("prepara", 1),
    ("tasi", 1),
    ("foho", 1),
    ("natar", 1),
    ("ikan", 1),
    ("modo", 1),
    ("aifuan", 1),
    ("turizmu", 1),
    ("lian", 1),
    ("múzika", 1),
    ("arte", 1),
    ("amu", 1),
    ("misa", 1),
    ("relijiaun", 1),
    ("alunu", 1),
    ("servisu", 1),
)

# Function words woven into leads/contents; several are stopwords so the
# with_stopwords preset behaves differently from default.
_FUNCTION: tuple[tuple[str, int], ...] = (
    ("iha", 10),
    ("ba", 8),
    ("no", 6),
    ("ne'e", 5),
    ("atu", 4),
    ("husi", 4),
    ("sira", 4),
    ("tanba", 3),
    ("ho", 3),
    ("mai", 3),
    ("ona", 3),
    ("sei", 2),
    ("mak", 2),
    ("katak", 2),
    ("ne'ebé", 2),
    ("hodi", 2),
    ("maibé", 1),
    ("bainhira", 1),
    ("ha'u", 1),
    ("kona-ba", 1),
)


def _sampler(rng: random.Random, vocab: tuple[tuple[str, int], ...]):
    words = [w for w, _ in vocab]
    weights = [c for _, c in vocab]

    def sample(k: int) -> list[str]:
        return rng.choices(words, weights=weights, k=k)

    return sample


def _sentence(rng: random.Random, content_sample, function_sample) -> str:
    n_content = rng.randint(4, 9)
    words = content_sample(n_content)
    # Weave 1-3 function words in at random interior positions.
    for w in function_sample(rng.randint(1, 3)):
        words.insert(rng.randint(1, len(words)), w)
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def generate_corpus(n_docs: int = DEFAULT_DOC_COUNT, seed: int = DEFAULT_SEED) -> list[Document]:
    """Generate ``n_docs`` synthetic news articles, deterministically."""
    if n_docs < 1:
        raise ValueError(f"n_docs must be >= 1, got {n_docs}")
    rng = random.Random(seed)
    content_sample = _sampler(rng, _VOCAB)
    function_sample = _sampler(rng, _FUNCTION)
    start = date(2021, 1, 1)
    docs = []
    for i in range(1, n_docs + 1):
        title_words = content_sample(rng.randint(4, 8))
        title_words[0] = title_words[0].capitalize()
        title = " ".join(title_words)
        lead = " ".join(_sentence(rng, content_sample, function_sample) for _ in range(rng.randint(1, 2)))
        body_sentences = [_sentence(rng, content_sample, function_sample) for _ in range(rng.randint(3, 8))]
        content = " ".join(body_sentences)
        if i % 5 == 0:
            # Some articles arrive as HTML fragments; analysis strips them.
            content = "<p>" + "</p> <p>".join(body_sentences) + "</p>"
        doc_id = f"tn{i:04d}"
        docs.append(
            Document(
                id=doc_id,
                title=title,
                lead=lead,
                content=content,
                url=f"https://news.example.tl/{doc_id}",
                published_at=(start + timedelta(days=rng.randint(0, 540))).isoformat(),
            )
        )
    return docs
