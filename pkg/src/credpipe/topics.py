"""LDA topic extraction by collapsed Gibbs sampling.

The chain is a pure-Python sequential sampler driven by random.Random:
slower than an array implementation, but bitwise reproducible for a
given seed on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

from .errors import DegenerateTextError, ValidationError
from .resources import default_stop_words
from .textmetrics import TokenizedText

import random

DEFAULT_TOPICS = 20
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
DEFAULT_TOP_WORDS = 30


def default_alpha(k: int) -> float:
    return 50.0 / k


@dataclass(frozen=True)
class LdaModel:
    k: int
    alpha: float
    beta: float
    vocabulary: tuple[str, ...]
    phi: tuple[tuple[float, ...], ...]
    theta: tuple[tuple[float, ...], ...]
    seed: int

    @property
    def vocab_size(self) -> int:
        return len(self.vocabulary)

    @property
    def doc_count(self) -> int:
        return len(self.theta)


def fit_lda(
    docs: Sequence[TokenizedText],
    k: int = DEFAULT_TOPICS,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    stop_words: frozenset[str] | None = None,
) -> LdaModel:
    """Fit by collapsed Gibbs sampling.

    Stop words are removed up front; the remaining tokens define the
    vocabulary. Each sweep reassigns every token with probability
    proportional to (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta),
    and phi/theta are read off the final counts with the same smoothing.
    """
    if k < 1:
        raise ValidationError(f"topic count must be >= 1, got {k}")
    if iterations < 1:
        raise ValidationError(f"iterations must be >= 1, got {iterations}")
    if beta <= 0:
        raise ValidationError(f"beta must be positive, got {beta}")
    if alpha is None:
        alpha = default_alpha(k)
    if alpha <= 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    if stop_words is None:
        stop_words = default_stop_words()

    kept = [[tok for tok in d.tokens if tok not in stop_words] for d in docs]
    vocabulary = tuple(sorted({tok for doc in kept for tok in doc}))
    if not vocabulary:
        raise DegenerateTextError("no vocabulary left after stop-word removal")
    word_ids = {w: i for i, w in enumerate(vocabulary)}
    doc_words = [[word_ids[tok] for tok in doc] for doc in kept]

    v = len(vocabulary)
    d_count = len(doc_words)
    rng = random.Random(seed)

    n_dk = [[0] * k for _ in range(d_count)]
    n_kw = [[0] * v for _ in range(k)]
    n_k = [0] * k
    assignments = [[0] * len(doc) for doc in doc_words]

    for di, doc in enumerate(doc_words):
        for pos, w in enumerate(doc):
            z = rng.randrange(k)
            assignments[di][pos] = z
            n_dk[di][z] += 1
            n_kw[z][w] += 1
            n_k[z] += 1

    beta_v = beta * v
    weights = [0.0] * k
    for _ in range(iterations):
        for di, doc in enumerate(doc_words):
            dk = n_dk[di]
            assign = assignments[di]
            for pos, w in enumerate(doc):
                z = assign[pos]
                dk[z] -= 1
                n_kw[z][w] -= 1
                n_k[z] -= 1

                total = 0.0
                for t in range(k):
                    wt = (dk[t] + alpha) * (n_kw[t][w] + beta) / (n_k[t] + beta_v)
                    weights[t] = wt
                    total += wt
                target = rng.random() * total
                acc = 0.0
                z = k - 1
                for t in range(k):
                    acc += weights[t]
                    if target < acc:
                        z = t
                        break

                assign[pos] = z
                dk[z] += 1
                n_kw[z][w] += 1
                n_k[z] += 1

    phi = tuple(
        tuple((n_kw[t][w] + beta) / (n_k[t] + beta_v) for w in range(v))
        for t in range(k)
    )
    theta = tuple(
        tuple(
            (n_dk[di][t] + alpha) / (len(doc_words[di]) + k * alpha)
            for t in range(k)
        )
        for di in range(d_count)
    )
    return LdaModel(
        k=k, alpha=alpha, beta=beta, vocabulary=vocabulary,
        phi=phi, theta=theta, seed=seed,
    )


def top_words(model: LdaModel, topic: int, n: int = DEFAULT_TOP_WORDS) -> tuple[str, ...]:
    """Highest-probability words of one topic, ties broken lexicographically.
    Asking for more words than the vocabulary has returns the whole
    vocabulary."""
    if not 0 <= topic < model.k:
        raise ValidationError(f"topic index {topic} out of range for k={model.k}")
    row = model.phi[topic]
    ranked = sorted(zip(model.vocabulary, row), key=lambda wv: (-wv[1], wv[0]))
    return tuple(w for w, _ in ranked[: max(n, 0)])


@dataclass(frozen=True)
class TopicShares:
    """Per-label topic mass (normalized theta sums) plus an argmax head
    count per topic, the circle-size analog."""

    labels: tuple[Hashable, ...]
    shares: dict[Hashable, tuple[float, ...]]
    argmax_counts: dict[Hashable, tuple[int, ...]]


def topic_share(model: LdaModel, labels: Sequence[Hashable]) -> TopicShares:
    """Aggregate theta by label. labels[i] tags the i-th fitted document."""
    if len(labels) != model.doc_count:
        raise ValidationError(
            f"got {len(labels)} labels for {model.doc_count} fitted documents"
        )
    sums: dict[Hashable, list[float]] = {}
    counts: dict[Hashable, list[int]] = {}
    for row, label in zip(model.theta, labels):
        acc = sums.setdefault(label, [0.0] * model.k)
        for t in range(model.k):
            acc[t] += row[t]
        best = max(range(model.k), key=lambda t: (row[t], -t))
        cnt = counts.setdefault(label, [0] * model.k)
        cnt[best] += 1

    ordered = tuple(sorted(sums, key=repr))
    shares = {}
    for label in ordered:
        total = sum(sums[label])
        shares[label] = tuple(x / total for x in sums[label])
    return TopicShares(
        labels=ordered,
        shares=shares,
        argmax_counts={label: tuple(counts[label]) for label in ordered},
    )


def share_entropy(shares: Sequence[float]) -> float:
    """Shannon entropy (natural log) of a topic-share vector; the
    dispersion number quoted in reports."""
    return -sum(p * math.log(p) for p in shares if p > 0.0)


def build_report(
    model: LdaModel,
    labels: Sequence[Hashable] | None = None,
    n_words: int = DEFAULT_TOP_WORDS,
) -> dict:
    """JSON-ready topic report: per-topic top words, plus per-label shares
    and entropy when labels are given."""
    report: dict = {
        "k": model.k,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "vocabulary_size": model.vocab_size,
        "topics": [
            {"topic": t, "top_words": list(top_words(model, t, n_words))}
            for t in range(model.k)
        ],
    }
    if labels is not None:
        ts = topic_share(model, labels)
        report["label_shares"] = {
            str(label): {
                "share": list(ts.shares[label]),
                "argmax_counts": list(ts.argmax_counts[label]),
                "entropy": share_entropy(ts.shares[label]),
            }
            for label in ts.labels
        }
    return report
