import sys
from pathlib import Path

import pytest

# metric_fixture.py lives next to the tests
sys.path.insert(0, str(Path(__file__).parent))

from credpipe.features import AffectLexicons, TagLexicon
from credpipe.resources import default_data_path, default_easy_words, default_stop_words


@pytest.fixture(scope="session")
def tag_lexicon() -> TagLexicon:
    return TagLexicon.load(
        default_data_path("pos_lexicon.tsv"),
        default_data_path("pos_suffix_rules.tsv"),
    )


@pytest.fixture(scope="session")
def affect_lexicons() -> AffectLexicons:
    return AffectLexicons.load(
        default_data_path("sentiment.tsv"),
        default_data_path("psycholinguistic.csv"),
    )


@pytest.fixture(scope="session")
def stop_words() -> frozenset:
    return default_stop_words()


@pytest.fixture(scope="session")
def easy_words() -> frozenset:
    return default_easy_words()
