"""Stance scoring: frequency summarizer, bag-of-words and handcrafted
similarity channels, and the threshold decision.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .annotate import Stance
from .errors import DegenerateTextError, DimensionMismatchError, ValidationError
from .features import stance_vector
from .resources import default_easy_words, default_stop_words
from .textmetrics import DEFAULT_MTLD_THRESHOLD, TokenizedText, count_syllables, tokenize

if TYPE_CHECKING:
    from .corpus import NewsArticle, TweetRecord

DEFAULT_SUMMARY_BUDGET = 280
REFUTE_UPPER = 0.4
SUPPORT_LOWER = 0.6


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity. Zero-norm input gives 0.0; mismatched or empty
    vectors are an error."""
    if len(a) != len(b):
        raise DimensionMismatchError(f"vector lengths differ: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise DimensionMismatchError("cannot take cosine of empty vectors")
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


@dataclass(frozen=True)
class Summary:
    """Extractive summary: selected sentences in article order.

    char_length counts the tokens joined by single spaces, which is also
    the length measure used against the budget during selection.
    """

    sentences: tuple[tuple[str, ...], ...]
    char_budget: int

    @property
    def tokens(self) -> tuple[str, ...]:
        return tuple(tok for sent in self.sentences for tok in sent)

    @property
    def char_length(self) -> int:
        toks = self.tokens
        if not toks:
            return 0
        return sum(len(t) for t in toks) + len(toks) - 1


def summarize(
    article: TokenizedText,
    char_budget: int = DEFAULT_SUMMARY_BUDGET,
    stop_words: frozenset[str] | None = None,
) -> Summary:
    """Greedy frequency summarizer.

    Each sentence scores the mean corpus-frequency of its non-stop tokens
    (stop words contribute zero but still count toward the mean's
    denominator). Sentences are taken in descending score order, ties
    broken by earlier position, until the next pick would overflow the
    budget; selection stops at the first overflow. If the single best
    sentence alone overflows, the summary is exactly that sentence.
    """
    if char_budget <= 0:
        raise ValidationError(f"char_budget must be positive, got {char_budget}")
    if article.sentence_count == 0:
        raise DegenerateTextError("cannot summarize text with no sentences")
    if stop_words is None:
        stop_words = default_stop_words()

    tf = Counter(tok for tok in article.tokens if tok not in stop_words)
    ranked = sorted(
        range(article.sentence_count),
        key=lambda i: (
            -sum(tf[tok] for tok in article.sentences[i]) / len(article.sentences[i]),
            i,
        ),
    )

    def sentence_length(sent: tuple[str, ...]) -> int:
        return sum(len(t) for t in sent) + len(sent) - 1

    chosen: list[int] = []
    used = 0
    for rank, idx in enumerate(ranked):
        cost = sentence_length(article.sentences[idx])
        if rank == 0 and cost > char_budget:
            chosen.append(idx)
            break
        extra = cost if not chosen else cost + 1
        if used + extra > char_budget:
            break
        chosen.append(idx)
        used += extra

    chosen.sort()
    return Summary(
        sentences=tuple(article.sentences[i] for i in chosen),
        char_budget=char_budget,
    )


@dataclass(frozen=True)
class BowVector:
    """Term counts aligned to a shared sorted vocabulary."""

    vocabulary: tuple[str, ...]
    counts: tuple[int, ...]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.vocabulary, self.counts))


def bow_pair(
    summary_tokens: Sequence[str],
    tweet_tokens: Sequence[str],
    stop_words: frozenset[str] | None = None,
) -> tuple[BowVector, BowVector]:
    """Count vectors over the union vocabulary of both sides, stop words
    removed. An empty union vocabulary is an error."""
    if stop_words is None:
        stop_words = default_stop_words()
    vocab = sorted((set(summary_tokens) | set(tweet_tokens)) - stop_words)
    if not vocab:
        raise DegenerateTextError("no vocabulary left after stop-word removal")
    left = Counter(t for t in summary_tokens if t not in stop_words)
    right = Counter(t for t in tweet_tokens if t not in stop_words)
    vocab_t = tuple(vocab)
    return (
        BowVector(vocab_t, tuple(left[w] for w in vocab_t)),
        BowVector(vocab_t, tuple(right[w] for w in vocab_t)),
    )


@dataclass(frozen=True)
class StanceThresholds:
    """Decision cut points on the averaged similarity. Values at a
    boundary fall to not-enough-info."""

    refute_upper: float = REFUTE_UPPER
    support_lower: float = SUPPORT_LOWER

    def __post_init__(self) -> None:
        if not 0.0 <= self.refute_upper <= self.support_lower <= 1.0:
            raise ValidationError(
                f"need 0 <= refute_upper <= support_lower <= 1, got "
                f"({self.refute_upper}, {self.support_lower})"
            )


def decide_stance(sim_avg: float, thresholds: StanceThresholds | None = None) -> Stance:
    t = thresholds or StanceThresholds()
    if sim_avg < t.refute_upper:
        return Stance.REFUTE
    if sim_avg > t.support_lower:
        return Stance.SUPPORT
    return Stance.NOT_ENOUGH_INFO


@dataclass(frozen=True)
class StanceConfig:
    summary_budget: int = DEFAULT_SUMMARY_BUDGET
    thresholds: StanceThresholds = StanceThresholds()
    mtld_threshold: float = DEFAULT_MTLD_THRESHOLD
    stop_words: frozenset[str] | None = None
    easy_words: frozenset[str] | None = None
    hcf_on_summary: bool = False


@dataclass(frozen=True)
class StanceScores:
    sim_hcf: float
    sim_text: float
    sim_avg: float
    stance: Stance


def _summary_as_text(summary: Summary) -> TokenizedText:
    toks = summary.tokens
    return TokenizedText(
        tokens=toks,
        sentences=summary.sentences,
        char_count=sum(sum(1 for c in t if c.isalnum()) for t in toks),
        syllable_count=sum(count_syllables(t) for t in toks),
    )


def score_stance_text(
    news_text: str,
    tweet_text: str,
    cfg: StanceConfig | None = None,
) -> StanceScores:
    """Two-channel stance score between an article body and a tweet.

    The handcrafted channel compares the eight-value style vectors of the
    two texts (of the summary instead of the full body when configured);
    the text channel compares bag-of-words counts of summary vs tweet.
    The decision applies the thresholds to the channel average.
    """
    cfg = cfg or StanceConfig()
    stop_words = cfg.stop_words if cfg.stop_words is not None else default_stop_words()
    easy_words = cfg.easy_words if cfg.easy_words is not None else default_easy_words()

    news_tok = tokenize(news_text)
    tweet_tok = tokenize(tweet_text)
    summary = summarize(news_tok, cfg.summary_budget, stop_words)

    hcf_source = _summary_as_text(summary) if cfg.hcf_on_summary else news_tok
    news_vec = stance_vector(hcf_source, easy_words, cfg.mtld_threshold)
    tweet_vec = stance_vector(tweet_tok, easy_words, cfg.mtld_threshold)
    sim_hcf = cosine(news_vec.values, tweet_vec.values)

    left, right = bow_pair(summary.tokens, tweet_tok.tokens, stop_words)
    sim_text = cosine(left.counts, right.counts)

    sim_avg = (sim_hcf + sim_text) / 2.0
    return StanceScores(
        sim_hcf=sim_hcf,
        sim_text=sim_text,
        sim_avg=sim_avg,
        stance=decide_stance(sim_avg, cfg.thresholds),
    )


def detect_stance(
    news: "NewsArticle",
    tweet: "TweetRecord",
    cfg: StanceConfig | None = None,
) -> StanceScores:
    """Record-level wrapper over score_stance_text."""
    return score_stance_text(news.body_text, tweet.text, cfg)
