import pytest

from tetunsearch import Document, PRESETS, generate_corpus, load_lexicons, load_topics
from tetunsearch.lexicons import bundled_topics_path


@pytest.fixture(scope="session")
def lexicons():
    return load_lexicons()


@pytest.fixture
def default_config():
    return PRESETS["default"]


@pytest.fixture
def two_doc_corpus():
    return [
        Document(id="d1", title="uma uma"),
        Document(id="d2", title="uma rai"),
    ]


@pytest.fixture(scope="session")
def synthetic_corpus():
    return generate_corpus()


@pytest.fixture(scope="session")
def bundled_topics():
    return load_topics(bundled_topics_path())
