"""Article cleaning ahead of embedding.

Cleaning strips web links, stop words, and every character that is not a
letter or digit, lowercases what remains, and marks sentence structure
with special tokens: one leading marker for the whole article and one
separator between each pair of adjacent sentences.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DataError

LEAD_MARKER = "[CLS]"
SENT_MARKER = "[SEP]"

_URL = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_SENT_SPLIT = re.compile(r"(?<=[.!?])\s+")
_WORD = re.compile(r"[a-z0-9]+")

STOP_WORDS = frozenset("""
    a about after all also an and any are as at be because been before both
    but by can could did do does for from had has have he her him his how i
    if in into is it its just like may me more most my no nor not of on once
    one only or other our out over own she so some such than that the their
    them then there these they this those through to too under until up very
    was we were what when where which while who whom why will with would you
    your
""".split())


@dataclass(frozen=True)
class PreprocessedArticle:
    """Cleaned article: per-sentence content tokens plus the marked-up text."""

    sentences: tuple[tuple[str, ...], ...]
    text: str

    @property
    def tokens(self) -> tuple[str, ...]:
        """All content tokens in order, markers excluded."""
        return tuple(tok for sent in self.sentences for tok in sent)


def preprocess(raw: str, stop_words: frozenset[str] = STOP_WORDS) -> PreprocessedArticle:
    """Clean one article and insert the sentence markers.

    Sentences that lose every token to cleaning are dropped; an article
    that loses all of them raises DataError.
    """
    if not raw or not raw.strip():
        raise DataError("article text is empty")
    delinked = _URL.sub(" ", raw)
    sentences = []
    for chunk in _SENT_SPLIT.split(delinked):
        words = tuple(w for w in _WORD.findall(chunk.lower()) if w not in stop_words)
        if words:
            sentences.append(words)
    if not sentences:
        raise DataError("article text is empty after cleaning")
    body = f" {SENT_MARKER} ".join(" ".join(sent) for sent in sentences)
    return PreprocessedArticle(tuple(sentences), f"{LEAD_MARKER} {body}")
