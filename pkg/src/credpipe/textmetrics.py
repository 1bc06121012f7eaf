"""Tokenization, syllable counting, and word-level text metrics.

Everything downstream (stance vectors, classifier features, corpus word
counts) goes through `tokenize`, so its conventions are the reference:

* word tokens are maximal runs of alphanumerics and apostrophes,
  lowercased; runs containing no alphanumeric character are dropped
* sentences are split where `.`, `!` or `?` is followed by whitespace or
  the end of the text
* char_count counts alphanumeric characters of the raw text only

All functions here are pure: no global state, no randomness.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from .errors import DegenerateTextError

# Honore's statistic diverges when every word is a hapax; downstream
# cosine similarity needs finite components, so cap instead of inf.
HONORE_CAP = 1e6

DEFAULT_MTLD_THRESHOLD = 0.72

_WORD_RUN = re.compile(r"(?:[^\W_]|')+", re.UNICODE)
_SENTENCE_SPLIT = re.compile(r"(?<=[.!?])\s+")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")


@dataclass(frozen=True)
class TokenizedText:
    """A tokenized document: flat token list plus sentence structure.

    Invariant: the sentence token lists partition `tokens` in order.
    """

    tokens: tuple[str, ...]
    sentences: tuple[tuple[str, ...], ...]
    char_count: int
    syllable_count: int

    @property
    def word_count(self) -> int:
        return len(self.tokens)

    @property
    def sentence_count(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class LexicalDiversity:
    ttr: float
    rttr: float
    cttr: float
    mtld: float


@dataclass(frozen=True)
class Readability:
    ari: float
    fkg: float
    fre: float
    dcr: float


@dataclass(frozen=True)
class VocabularyRichness:
    honore_hs: float
    sichel: float
    brunet_w: float
    ttr: float


def tokenize(text: str) -> TokenizedText:
    """Tokenize raw text into the structure the metrics consume.

    Empty input is legal and yields empty structures.
    """
    sentences = []
    for chunk in _SENTENCE_SPLIT.split(text):
        words = tuple(
            m.group(0).lower()
            for m in _WORD_RUN.finditer(chunk)
            if any(ch.isalnum() for ch in m.group(0))
        )
        if words:
            sentences.append(words)
    tokens = tuple(w for sent in sentences for w in sent)
    char_count = sum(1 for ch in text if ch.isalnum())
    syllables = sum(count_syllables(w) for w in tokens)
    return TokenizedText(
        tokens=tokens,
        sentences=tuple(sentences),
        char_count=char_count,
        syllable_count=syllables,
    )


def count_syllables(word: str) -> int:
    """Heuristic syllable count: vowel groups (aeiouy runs), minus a
    silent trailing 'e' unless the word ends in 'le'; at least 1.

    The exact counter is a swappable convention; this is the documented
    default used by FKG/FRE.
    """
    if not word:
        raise ValueError("count_syllables requires a nonempty token")
    w = word.lower()
    groups = len(_VOWEL_GROUP.findall(w))
    if w.endswith("e") and not w.endswith("le"):
        groups -= 1
    return max(groups, 1)


def lexical_diversity(
    t: TokenizedText, mtld_threshold: float = DEFAULT_MTLD_THRESHOLD
) -> LexicalDiversity:
    """TTR, root/corrected TTR, and bidirectional MTLD.

    TTR = V/N, RTTR = V/sqrt(N), CTTR = V/sqrt(2N). MTLD is the mean of a
    forward and a reverse factor-count pass (see `_mtld_pass`).

    An empty token list is a signaled degenerate case: all four metrics
    are defined as 0.
    """
    if not 0.0 < mtld_threshold < 1.0:
        raise ValueError(f"mtld_threshold must be in (0,1), got {mtld_threshold}")
    n = len(t.tokens)
    if n == 0:
        return LexicalDiversity(ttr=0.0, rttr=0.0, cttr=0.0, mtld=0.0)
    v = len(set(t.tokens))
    forward = _mtld_pass(t.tokens, mtld_threshold)
    reverse = _mtld_pass(tuple(reversed(t.tokens)), mtld_threshold)
    return LexicalDiversity(
        ttr=v / n,
        rttr=v / math.sqrt(n),
        cttr=v / math.sqrt(2 * n),
        mtld=(forward + reverse) / 2.0,
    )


def _mtld_pass(tokens: tuple[str, ...], threshold: float) -> float:
    """One directional MTLD pass.

    A factor completes whenever the running TTR drops to the threshold or
    below; the tail contributes a partial factor (1 - TTR_run)/(1 - threshold).
    With no completed factor and a running TTR of 1 (all tokens unique)
    the pass degenerates to N, keeping "longer unique text = more diverse"
    without dividing by zero.
    """
    factors = 0.0
    seen: set[str] = set()
    run_len = 0
    for tok in tokens:
        run_len += 1
        seen.add(tok)
        if len(seen) / run_len <= threshold:
            factors += 1.0
            seen.clear()
            run_len = 0
    if run_len > 0:
        run_ttr = len(seen) / run_len
        factors += (1.0 - run_ttr) / (1.0 - threshold)
    if factors == 0.0:
        return float(len(tokens))
    return len(tokens) / factors


def readability(t: TokenizedText, easy_words: frozenset[str] | set[str]) -> Readability:
    """ARI, Flesch-Kincaid grade, Flesch reading ease, and Dale-Chall.

        ARI = 4.71*(chars/words) + 0.5*(words/sentences) - 21.43
        FKG = 0.39*(words/sentences) + 11.8*(syllables/words) - 15.59
        FRE = 206.835 - 1.015*(words/sentences) - 84.6*(syllables/words)
        DCR = 0.1579*pct_difficult + 0.0496*(words/sentences)
              (+ 3.6365 when pct_difficult > 5)

    `easy_words` is the Dale-Chall easy list (injectable); a "difficult"
    word is any token not in it, and pct_difficult is in percent.
    """
    words = t.word_count
    sentences = t.sentence_count
    if words == 0 or sentences == 0:
        raise DegenerateTextError(
            f"readability needs >=1 word and >=1 sentence "
            f"(got {words} words, {sentences} sentences)"
        )
    wps = words / sentences
    spw = t.syllable_count / words
    cpw = t.char_count / words
    difficult = sum(1 for tok in t.tokens if tok not in easy_words)
    pct_difficult = 100.0 * difficult / words
    dcr = 0.1579 * pct_difficult + 0.0496 * wps
    if pct_difficult > 5.0:
        dcr += 3.6365
    return Readability(
        ari=4.71 * cpw + 0.5 * wps - 21.43,
        fkg=0.39 * wps + 11.8 * spw - 15.59,
        fre=206.835 - 1.015 * wps - 84.6 * spw,
        dcr=dcr,
    )


def vocabulary_richness(t: TokenizedText) -> VocabularyRichness:
    """Honore's statistic, Sichel measure, Brunet's W, and TTR.

        HS   = 100*ln(N) / (1 - V1/V)   (V1 = hapax legomena)
        SICH = V2/V                     (V2 = dislegomena)
        W    = N^(V^-0.165)

    All-hapax text makes HS diverge; it is capped at HONORE_CAP so
    downstream vectors stay finite.
    """
    n = t.word_count
    if n == 0:
        raise DegenerateTextError("vocabulary_richness needs >=1 token")
    counts = Counter(t.tokens)
    v = len(counts)
    v1 = sum(1 for c in counts.values() if c == 1)
    v2 = sum(1 for c in counts.values() if c == 2)
    if v1 == v:
        hs = HONORE_CAP
    else:
        hs = min(100.0 * math.log(n) / (1.0 - v1 / v), HONORE_CAP)
    return VocabularyRichness(
        honore_hs=hs,
        sichel=v2 / v,
        brunet_w=n ** (v ** -0.165),
        ttr=v / n,
    )
