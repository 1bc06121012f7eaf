"""Labeling rules: source-rating fusion for news and the
(news credibility x stance) truth table for tweets.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from urllib.parse import urlparse

from .errors import ValidationError

CHART_SCORE_MIN = 0.0
CHART_SCORE_MAX = 64.0

# Strict rule boundaries: scores of exactly 42 / 24 satisfy neither rule.
RELIABLE_CHART_FLOOR = 42.0
UNRELIABLE_CHART_CEIL = 24.0


class MbfcLevel(Enum):
    VERY_HIGH = "very_high"
    HIGH = "high"
    MOST_FACTUAL = "most_factual"
    MIXED = "mixed"
    LOW = "low"
    VERY_LOW = "very_low"

    @classmethod
    def parse(cls, text: str) -> "MbfcLevel":
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        for level in cls:
            if level.value == key:
                return level
        raise ValidationError(f"unknown MBFC level {text!r}")


class NewsCredibility(Enum):
    """News credibility outcome; numeric codes follow the corpus schema
    (0 = unreliable, 1 = reliable, excluded articles carry no code)."""

    UNRELIABLE = 0
    RELIABLE = 1
    EXCLUDED = "excluded"

    @property
    def code(self):
        return self.value if self is not NewsCredibility.EXCLUDED else None

    @classmethod
    def from_code(cls, code: int) -> "NewsCredibility":
        if code == 0:
            return cls.UNRELIABLE
        if code == 1:
            return cls.RELIABLE
        raise ValidationError(f"unknown news label code {code!r}")


class Stance(Enum):
    SUPPORT = "support"
    REFUTE = "refute"
    NOT_ENOUGH_INFO = "not_enough_info"

    @classmethod
    def parse(cls, text: str) -> "Stance":
        key = text.strip().lower().replace("-", "_").replace(" ", "_")
        for stance in cls:
            if stance.value == key:
                return stance
        raise ValidationError(f"unknown stance {text!r}")


class TweetLabel(Enum):
    UNRELIABLE = 0
    INCONCLUSIVE = 1
    RELIABLE = 2

    @property
    def code(self) -> int:
        return self.value

    @classmethod
    def from_code(cls, code: int) -> "TweetLabel":
        for label in cls:
            if label.value == code:
                return label
        raise ValidationError(f"unknown tweet label code {code!r}")


@dataclass(frozen=True)
class SourceRating:
    domain: str
    mbfc_level: MbfcLevel
    chart_score: float


def fuse_source(r: SourceRating) -> NewsCredibility:
    """Two-filter credibility fusion.

    Reliable requires a High/Very High factuality level AND a chart score
    strictly above 42; Unreliable requires Low/Very Low AND strictly below
    24. Everything else (including all Most Factual / Mixed sources and
    boundary scores) is excluded.
    """
    if not CHART_SCORE_MIN <= r.chart_score <= CHART_SCORE_MAX:
        raise ValidationError(
            f"chart_score outside [{CHART_SCORE_MIN:g},{CHART_SCORE_MAX:g}]",
            record=r.domain,
            field=str(r.chart_score),
        )
    if r.mbfc_level in (MbfcLevel.HIGH, MbfcLevel.VERY_HIGH) and r.chart_score > RELIABLE_CHART_FLOOR:
        return NewsCredibility.RELIABLE
    if r.mbfc_level in (MbfcLevel.LOW, MbfcLevel.VERY_LOW) and r.chart_score < UNRELIABLE_CHART_CEIL:
        return NewsCredibility.UNRELIABLE
    return NewsCredibility.EXCLUDED


_TWEET_RULES = {
    (NewsCredibility.RELIABLE, Stance.SUPPORT): TweetLabel.RELIABLE,
    (NewsCredibility.UNRELIABLE, Stance.REFUTE): TweetLabel.RELIABLE,
    (NewsCredibility.RELIABLE, Stance.NOT_ENOUGH_INFO): TweetLabel.INCONCLUSIVE,
    (NewsCredibility.UNRELIABLE, Stance.NOT_ENOUGH_INFO): TweetLabel.INCONCLUSIVE,
    (NewsCredibility.RELIABLE, Stance.REFUTE): TweetLabel.UNRELIABLE,
    (NewsCredibility.UNRELIABLE, Stance.SUPPORT): TweetLabel.UNRELIABLE,
}


def label_tweet(news: NewsCredibility, stance: Stance) -> TweetLabel:
    """Tweet label from the six-case (news credibility x stance) table.

    Excluded news produces no tweets and is rejected here.
    """
    if news is NewsCredibility.EXCLUDED:
        raise ValidationError("cannot label a tweet against excluded news")
    return _TWEET_RULES[(news, stance)]


def load_ratings(path: str | Path) -> dict[str, SourceRating]:
    """Load the `domain,mbfc_level,chart_score` ratings CSV (header row
    required). Keys are lowercased domains."""
    ratings: dict[str, SourceRating] = {}
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != [
            "domain", "mbfc_level", "chart_score",
        ]:
            raise ValidationError(f"ratings file {path} must start with header domain,mbfc_level,chart_score")
        for row in reader:
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise ValidationError("ratings row needs 3 fields", record=",".join(row))
            domain = row[0].strip().lower()
            level = MbfcLevel.parse(row[1])
            try:
                score = float(row[2])
            except ValueError:
                raise ValidationError("chart_score is not a number", record=domain, field=row[2])
            if not CHART_SCORE_MIN <= score <= CHART_SCORE_MAX:
                raise ValidationError("chart_score outside [0,64]", record=domain, field=row[2])
            if domain in ratings:
                raise ValidationError("duplicate domain in ratings", record=domain)
            ratings[domain] = SourceRating(domain=domain, mbfc_level=level, chart_score=score)
    return ratings


def rating_for_url(url: str, ratings: dict[str, SourceRating]) -> SourceRating | None:
    """Match an article URL to a rating by registered-domain suffix,
    case-insensitively (www.example.com matches example.com)."""
    host = urlparse(url).netloc.lower()
    host = host.split("@")[-1].split(":")[0]
    if not host:
        return None
    parts = host.split(".")
    for i in range(len(parts)):
        candidate = ".".join(parts[i:])
        hit = ratings.get(candidate)
        if hit is not None:
            return hit
    return None
