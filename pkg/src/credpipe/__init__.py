"""Corpus credibility pipeline: text metrics, stance scoring, labeling
rules, corpus statistics, topic extraction, and classical baselines.
"""

from .annotate import (
    MbfcLevel,
    NewsCredibility,
    SourceRating,
    Stance,
    TweetLabel,
    fuse_source,
    label_tweet,
)
from .baselines import Dataset, EvalReport, evaluate, train_boost, train_logreg, train_tree
from .corpus import (
    CorpusStats,
    NewsArticle,
    TweetRecord,
    compute_stats,
    load_news,
    load_tweets,
    save_news,
    save_tweets,
    tweet_label_counts,
)
from .errors import (
    ConfigError,
    CredpipeError,
    DegenerateTextError,
    DimensionMismatchError,
    ReferentialIntegrityError,
    ValidationError,
)
from .features import classifier_vector, stance_vector
from .stance import StanceConfig, StanceScores, detect_stance, score_stance_text, summarize
from .textmetrics import (
    count_syllables,
    lexical_diversity,
    readability,
    tokenize,
    vocabulary_richness,
)
from .topics import LdaModel, fit_lda, top_words, topic_share

__version__ = "0.1.0"

__all__ = [
    "CorpusStats",
    "ConfigError",
    "CredpipeError",
    "Dataset",
    "DegenerateTextError",
    "DimensionMismatchError",
    "EvalReport",
    "LdaModel",
    "MbfcLevel",
    "NewsArticle",
    "NewsCredibility",
    "ReferentialIntegrityError",
    "SourceRating",
    "Stance",
    "StanceConfig",
    "StanceScores",
    "TweetLabel",
    "TweetRecord",
    "ValidationError",
    "classifier_vector",
    "compute_stats",
    "count_syllables",
    "detect_stance",
    "evaluate",
    "fit_lda",
    "fuse_source",
    "label_tweet",
    "lexical_diversity",
    "load_news",
    "load_tweets",
    "readability",
    "save_news",
    "save_tweets",
    "score_stance_text",
    "stance_vector",
    "summarize",
    "tokenize",
    "top_words",
    "topic_share",
    "train_boost",
    "train_logreg",
    "train_tree",
    "tweet_label_counts",
    "vocabulary_richness",
]
