"""Pipeline configuration: a single TOML file with per-section settings,
overridable per command by CLI flags (flags win).

Relative paths inside the file resolve against the file's directory.
The config path itself can come from the CREDPIPE_CONFIG environment
variable when no flag is given.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .errors import ConfigError
from .features import AffectLexicons, TagLexicon
from .resources import default_data_path, load_word_set
from .stance import DEFAULT_SUMMARY_BUDGET, StanceConfig, StanceThresholds
from .textmetrics import DEFAULT_MTLD_THRESHOLD
from .topics import DEFAULT_BETA, DEFAULT_ITERATIONS, DEFAULT_TOP_WORDS, DEFAULT_TOPICS

CONFIG_ENV_VAR = "CREDPIPE_CONFIG"

_PATH_KEYS = {
    "stop_words": "stop_words_path",
    "easy_words": "easy_words_path",
    "pos_lexicon": "pos_lexicon_path",
    "pos_suffix_rules": "pos_suffix_path",
    "sentiment": "sentiment_path",
    "psycholinguistic": "psycholinguistic_path",
    "ratings": "ratings_path",
}

_STANCE_KEYS = {
    "refute_upper": "refute_upper",
    "support_lower": "support_lower",
    "summary_budget": "summary_budget",
    "mtld_threshold": "mtld_threshold",
    "hcf_on_summary": "hcf_on_summary",
}

_LDA_KEYS = {
    "topics": "lda_topics",
    "alpha": "lda_alpha",
    "beta": "lda_beta",
    "iterations": "lda_iterations",
    "top_words": "lda_top_words",
}

_BASELINE_KEYS = {
    "model": "model",
    "folds": "folds",
    "logreg_lr": "logreg_lr",
    "logreg_epochs": "logreg_epochs",
    "logreg_l2": "logreg_l2",
    "tree_max_depth": "tree_max_depth",
    "tree_min_leaf": "tree_min_leaf",
    "boost_rounds": "boost_rounds",
    "boost_shrinkage": "boost_shrinkage",
    "boost_depth": "boost_depth",
}

MODEL_KINDS = ("logreg", "tree", "boost")


@dataclass(frozen=True)
class PipelineConfig:
    stop_words_path: Path | None = None
    easy_words_path: Path | None = None
    pos_lexicon_path: Path | None = None
    pos_suffix_path: Path | None = None
    sentiment_path: Path | None = None
    psycholinguistic_path: Path | None = None
    ratings_path: Path | None = None

    refute_upper: float = 0.4
    support_lower: float = 0.6
    summary_budget: int = DEFAULT_SUMMARY_BUDGET
    mtld_threshold: float = DEFAULT_MTLD_THRESHOLD
    hcf_on_summary: bool = False

    lda_topics: int = DEFAULT_TOPICS
    lda_alpha: float | None = None
    lda_beta: float = DEFAULT_BETA
    lda_iterations: int = DEFAULT_ITERATIONS
    lda_top_words: int = DEFAULT_TOP_WORDS

    model: str = "logreg"
    folds: int = 5
    logreg_lr: float = 0.1
    logreg_epochs: int = 300
    logreg_l2: float = 0.0
    tree_max_depth: int = 8
    tree_min_leaf: int = 1
    boost_rounds: int = 50
    boost_shrinkage: float = 0.1
    boost_depth: int = 2

    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.refute_upper <= self.support_lower <= 1.0:
            raise ConfigError(
                f"need 0 <= refute_upper <= support_lower <= 1, got "
                f"({self.refute_upper}, {self.support_lower})"
            )
        if self.model not in MODEL_KINDS:
            raise ConfigError(f"model must be one of {MODEL_KINDS}, got {self.model!r}")
        for name in ("summary_budget", "lda_topics", "lda_iterations",
                     "logreg_epochs", "tree_max_depth", "tree_min_leaf",
                     "boost_rounds", "boost_depth"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        for name in ("lda_beta", "logreg_lr", "boost_shrinkage"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.lda_alpha is not None and self.lda_alpha <= 0:
            raise ConfigError(f"lda alpha must be positive, got {self.lda_alpha}")
        if not 0.0 < self.mtld_threshold < 1.0:
            raise ConfigError(f"mtld_threshold must be in (0,1), got {self.mtld_threshold}")
        if self.logreg_l2 < 0:
            raise ConfigError(f"logreg_l2 must be >= 0, got {self.logreg_l2}")
        for f in fields(self):
            if f.name.endswith("_path"):
                p = getattr(self, f.name)
                if p is not None and not Path(p).is_file():
                    raise ConfigError(f"{f.name} does not exist: {p}")

    def stop_words(self) -> frozenset[str]:
        return load_word_set(self.stop_words_path or default_data_path("stopwords.txt"))

    def easy_words(self) -> frozenset[str]:
        return load_word_set(self.easy_words_path or default_data_path("easy_words.txt"))

    def tag_lexicon(self) -> TagLexicon:
        return TagLexicon.load(
            self.pos_lexicon_path or default_data_path("pos_lexicon.tsv"),
            self.pos_suffix_path or default_data_path("pos_suffix_rules.tsv"),
        )

    def affect_lexicons(self) -> AffectLexicons:
        return AffectLexicons.load(
            self.sentiment_path or default_data_path("sentiment.tsv"),
            self.psycholinguistic_path or default_data_path("psycholinguistic.csv"),
        )

    def stance_config(self) -> StanceConfig:
        return StanceConfig(
            summary_budget=self.summary_budget,
            thresholds=StanceThresholds(self.refute_upper, self.support_lower),
            mtld_threshold=self.mtld_threshold,
            stop_words=self.stop_words(),
            easy_words=self.easy_words(),
            hcf_on_summary=self.hcf_on_summary,
        )

    def with_overrides(self, **kwargs) -> "PipelineConfig":
        provided = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **provided) if provided else self


def _apply_section(
    values: dict, section: str, table: dict, key_map: dict[str, str], base: Path | None
) -> None:
    for key, raw in table.items():
        if key not in key_map:
            raise ConfigError(f"unknown key {key!r} in [{section}]")
        value = raw
        if key_map[key].endswith("_path"):
            p = Path(raw)
            if base is not None and not p.is_absolute():
                p = base / p
            value = p
        values[key_map[key]] = value


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Load the TOML config; fall back to CREDPIPE_CONFIG, then to pure
    defaults when neither names a file."""
    if path is None:
        env = os.environ.get(CONFIG_ENV_VAR, "").strip()
        path = env or None
    if path is None:
        return PipelineConfig()

    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file does not exist: {path}")
    with open(path, "rb") as f:
        try:
            doc = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"config file {path} is not valid TOML: {e}")

    base = path.parent
    values: dict = {}
    for section, raw in doc.items():
        if section == "seed":
            values["seed"] = raw
            continue
        if not isinstance(raw, dict):
            raise ConfigError(f"top-level key {section!r} is not a section or 'seed'")
        if section == "paths":
            _apply_section(values, section, raw, _PATH_KEYS, base)
        elif section == "stance":
            _apply_section(values, section, raw, _STANCE_KEYS, None)
        elif section == "lda":
            _apply_section(values, section, raw, _LDA_KEYS, None)
        elif section == "baselines":
            _apply_section(values, section, raw, _BASELINE_KEYS, None)
        else:
            raise ConfigError(f"unknown config section [{section}]")
    return PipelineConfig(**values)
