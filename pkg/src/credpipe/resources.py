"""Loaders for word-list files plus the bundled default data.

File formats:
  * word lists (stop words, easy words): one lowercase word per line, UTF-8
  * bundled defaults live in credpipe/data/ and are compact starter sets;
    every consumer takes the loaded set as an argument, so production runs
    can inject full-size lists via the pipeline config
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def load_word_set(path: str | Path) -> frozenset[str]:
    """Read a one-word-per-line file into a lowercase frozenset."""
    words = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            word = line.strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def _bundled(name: str) -> Path:
    return Path(str(resources.files("credpipe").joinpath("data").joinpath(name)))


def default_easy_words() -> frozenset[str]:
    return load_word_set(_bundled("easy_words.txt"))


def default_stop_words() -> frozenset[str]:
    return load_word_set(_bundled("stopwords.txt"))


def default_data_path(name: str) -> Path:
    """Path of a bundled data file (for config defaults and the CLI)."""
    return _bundled(name)
