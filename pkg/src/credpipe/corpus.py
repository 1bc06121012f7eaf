"""Corpus ingestion, validation, persistence, and summary statistics.

Canonical on-disk format is JSON Lines (one record per line, UTF-8);
CSV import is supported for interchange with list fields joined by "|".
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

from .annotate import NewsCredibility, Stance, TweetLabel
from .errors import ReferentialIntegrityError, ValidationError
from .textmetrics import tokenize

NEWS_FIELDS = ("news_id", "url", "publisher", "publish_date", "authors",
               "title", "image_refs", "body_text", "label")
TWEET_FIELDS = ("tweet_id", "text", "news_ref", "stance", "label")

_CSV_LIST_SEP = "|"


@dataclass(frozen=True)
class NewsArticle:
    news_id: str
    url: str
    publisher: str
    publish_date: str
    authors: tuple[str, ...]
    title: str
    image_refs: tuple[str, ...]
    body_text: str
    label: NewsCredibility | None = None

    def to_record(self) -> dict:
        return {
            "news_id": self.news_id,
            "url": self.url,
            "publisher": self.publisher,
            "publish_date": self.publish_date,
            "authors": list(self.authors),
            "title": self.title,
            "image_refs": list(self.image_refs),
            "body_text": self.body_text,
            "label": None if self.label is None else self.label.code,
        }


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: str
    text: str
    news_ref: str
    stance: Stance | None = None
    label: TweetLabel | None = None

    def to_record(self) -> dict:
        return {
            "tweet_id": self.tweet_id,
            "text": self.text,
            "news_ref": self.news_ref,
            "stance": None if self.stance is None else self.stance.value,
            "label": None if self.label is None else self.label.code,
        }


def _require(cond: bool, message: str, record: str, field: str) -> None:
    if not cond:
        raise ValidationError(message, record=record, field=field)


def _string_list(value, record: str, field: str) -> tuple[str, ...]:
    _require(isinstance(value, list), f"{field} must be a list", record, field)
    for item in value:
        _require(isinstance(item, str), f"{field} entries must be strings", record, field)
    return tuple(value)


def validate_news_record(rec: dict) -> NewsArticle:
    rid = str(rec.get("news_id", "<missing>"))
    missing = [f for f in NEWS_FIELDS if f not in rec]
    _require(not missing, f"missing fields {missing}", rid, ",".join(missing) or "?")
    extra = sorted(set(rec) - set(NEWS_FIELDS))
    _require(not extra, f"unknown fields {extra}", rid, ",".join(extra))

    _require(isinstance(rec["news_id"], str) and rec["news_id"] != "", "news_id must be a nonempty string", rid, "news_id")
    for f in ("url", "publisher", "title", "body_text"):
        _require(isinstance(rec[f], str), f"{f} must be a string", rid, f)
    _require(isinstance(rec["publish_date"], str), "publish_date must be a string", rid, "publish_date")
    try:
        date.fromisoformat(rec["publish_date"])
    except ValueError:
        raise ValidationError("publish_date is not an ISO-8601 date", record=rid, field="publish_date")

    authors = _string_list(rec["authors"], rid, "authors")
    image_refs = _string_list(rec["image_refs"], rid, "image_refs")

    raw_label = rec["label"]
    label: NewsCredibility | None
    if raw_label is None:
        label = None
    else:
        _require(isinstance(raw_label, int) and not isinstance(raw_label, bool), "label must be 0, 1, or null", rid, "label")
        label = NewsCredibility.from_code(raw_label)
    if label is not None:
        _require(rec["body_text"].strip() != "", "labeled article needs nonempty body_text", rid, "body_text")

    return NewsArticle(
        news_id=rec["news_id"],
        url=rec["url"],
        publisher=rec["publisher"],
        publish_date=rec["publish_date"],
        authors=authors,
        title=rec["title"],
        image_refs=image_refs,
        body_text=rec["body_text"],
        label=label,
    )


def validate_tweet_record(rec: dict) -> TweetRecord:
    rid = str(rec.get("tweet_id", "<missing>"))
    missing = [f for f in TWEET_FIELDS if f not in rec]
    _require(not missing, f"missing fields {missing}", rid, ",".join(missing) or "?")
    extra = sorted(set(rec) - set(TWEET_FIELDS))
    _require(not extra, f"unknown fields {extra}", rid, ",".join(extra))

    _require(isinstance(rec["tweet_id"], str) and rec["tweet_id"].isdigit(), "tweet_id must be a numeric string", rid, "tweet_id")
    _require(isinstance(rec["text"], str), "text must be a string", rid, "text")
    _require(isinstance(rec["news_ref"], str) and rec["news_ref"] != "", "news_ref must be a nonempty string", rid, "news_ref")

    raw_stance = rec["stance"]
    stance = None if raw_stance is None else Stance.parse(str(raw_stance))

    raw_label = rec["label"]
    label: TweetLabel | None
    if raw_label is None:
        label = None
    else:
        _require(isinstance(raw_label, int) and not isinstance(raw_label, bool), "label must be 0, 1, 2, or null", rid, "label")
        label = TweetLabel.from_code(raw_label)

    return TweetRecord(
        tweet_id=rec["tweet_id"],
        text=rec["text"],
        news_ref=rec["news_ref"],
        stance=stance,
        label=label,
    )


def _read_jsonl(path: str | Path) -> Iterable[tuple[int, dict]]:
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValidationError(f"line {lineno} is not valid JSON: {e}", record=f"line {lineno}")
            if not isinstance(rec, dict):
                raise ValidationError(f"line {lineno} is not a JSON object", record=f"line {lineno}")
            yield lineno, rec


def load_news(path: str | Path) -> list[NewsArticle]:
    articles: list[NewsArticle] = []
    seen: set[str] = set()
    for _, rec in _read_jsonl(path):
        art = validate_news_record(rec)
        if art.news_id in seen:
            raise ValidationError("duplicate news_id", record=art.news_id, field="news_id")
        seen.add(art.news_id)
        articles.append(art)
    return articles


def load_tweets(path: str | Path, news: Sequence[NewsArticle] | None = None) -> list[TweetRecord]:
    """Load tweets; when a news corpus is given, every news_ref must
    resolve into it or the orphan tweet ids are reported together."""
    tweets: list[TweetRecord] = []
    seen: set[str] = set()
    for _, rec in _read_jsonl(path):
        tw = validate_tweet_record(rec)
        if tw.tweet_id in seen:
            raise ValidationError("duplicate tweet_id", record=tw.tweet_id, field="tweet_id")
        seen.add(tw.tweet_id)
        tweets.append(tw)
    if news is not None:
        known = {a.news_id for a in news}
        orphans = tuple(t.tweet_id for t in tweets if t.news_ref not in known)
        if orphans:
            raise ReferentialIntegrityError(
                f"{len(orphans)} tweet(s) reference missing news articles",
                orphans=orphans,
            )
    return tweets


def _dump_jsonl(path: str | Path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, sort_keys=True, ensure_ascii=False, separators=(",", ":")))
            f.write("\n")


def save_news(path: str | Path, articles: Sequence[NewsArticle]) -> None:
    _dump_jsonl(path, (a.to_record() for a in articles))


def save_tweets(path: str | Path, tweets: Sequence[TweetRecord]) -> None:
    _dump_jsonl(path, (t.to_record() for t in tweets))


def import_news_csv(path: str | Path) -> list[NewsArticle]:
    """CSV interchange reader; same columns as the JSONL schema, with
    authors and image_refs joined by '|' and label blank for null."""
    articles = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != NEWS_FIELDS:
            raise ValidationError(f"news CSV must have header {','.join(NEWS_FIELDS)}")
        for row in reader:
            rec = dict(row)
            rec["authors"] = [a for a in rec["authors"].split(_CSV_LIST_SEP) if a]
            rec["image_refs"] = [a for a in rec["image_refs"].split(_CSV_LIST_SEP) if a]
            rec["label"] = None if rec["label"] == "" else int(rec["label"])
            art = validate_news_record(rec)
            if art.news_id in seen:
                raise ValidationError("duplicate news_id", record=art.news_id, field="news_id")
            seen.add(art.news_id)
            articles.append(art)
    return articles


@dataclass(frozen=True)
class WordCountStats:
    mean: float
    median: int
    mode: int


@dataclass(frozen=True)
class CorpusStats:
    """Per-label corpus summary; label keys are the integer codes."""

    label_counts: dict[int, int]
    publishers: dict[int, dict[str, int]]
    author_count_hist: dict[int, dict[int, int]]
    word_counts: dict[int, WordCountStats]
    date_hist: dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.label_counts.values())

    def to_json_dict(self) -> dict:
        return {
            "label_counts": {str(k): v for k, v in sorted(self.label_counts.items())},
            "publishers": {
                str(k): dict(sorted(v.items())) for k, v in sorted(self.publishers.items())
            },
            "author_count_hist": {
                str(k): {str(n): c for n, c in sorted(v.items())}
                for k, v in sorted(self.author_count_hist.items())
            },
            "word_counts": {
                str(k): {"mean": s.mean, "median": s.median, "mode": s.mode}
                for k, s in sorted(self.word_counts.items())
            },
            "date_hist": dict(sorted(self.date_hist.items())),
            "total": self.total,
        }


def summarize_counts(values: Sequence[int]) -> WordCountStats:
    """Mean/median/mode with pinned tie rules: median is the lower middle
    for even sizes, mode the smallest most-frequent value."""
    if not values:
        return WordCountStats(mean=0.0, median=0, mode=0)
    return WordCountStats(
        mean=sum(values) / len(values),
        median=statistics.median_low(values),
        mode=min(statistics.multimode(values)),
    )


def compute_stats(news: Sequence[NewsArticle]) -> CorpusStats:
    """Summary statistics over a fully labeled news corpus. Word counts
    use the shared tokenizer."""
    label_counts: dict[int, int] = {}
    publishers: dict[int, dict[str, int]] = {}
    author_hist: dict[int, dict[int, int]] = {}
    word_lists: dict[int, list[int]] = {}
    date_hist: dict[str, int] = {}

    for art in news:
        if art.label is None:
            raise ValidationError("stats need a labeled corpus", record=art.news_id, field="label")
        code = art.label.code
        label_counts[code] = label_counts.get(code, 0) + 1
        pubs = publishers.setdefault(code, {})
        pubs[art.publisher] = pubs.get(art.publisher, 0) + 1
        ah = author_hist.setdefault(code, {})
        n_authors = len(art.authors)
        ah[n_authors] = ah.get(n_authors, 0) + 1
        word_lists.setdefault(code, []).append(len(tokenize(art.body_text).tokens))
        date_hist[art.publish_date] = date_hist.get(art.publish_date, 0) + 1

    return CorpusStats(
        label_counts=label_counts,
        publishers=publishers,
        author_count_hist=author_hist,
        word_counts={code: summarize_counts(vals) for code, vals in word_lists.items()},
        date_hist=date_hist,
    )


def tweet_label_counts(tweets: Sequence[TweetRecord]) -> dict[int, int]:
    """Per-label tweet counts; every tweet must carry a label."""
    counts: dict[int, int] = {}
    for tw in tweets:
        if tw.label is None:
            raise ValidationError("tweet counts need labeled tweets", record=tw.tweet_id, field="label")
        counts[tw.label.code] = counts.get(tw.label.code, 0) + 1
    return counts
