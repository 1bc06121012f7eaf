"""Handcrafted feature vectors: the 8-dim stance vector and the 48-dim
classifier vector (37 PoS proportions + sentiment + 4 psycholinguistic +
4 vocabulary-richness + 2 readability slots).

Tagging is a deterministic lexicon + suffix-rule tagger over a fixed
37-tag set; `pos_proportions_from_tags` is the escape hatch for text
tagged by an external tool.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import DegenerateTextError, ValidationError
from .textmetrics import (
    DEFAULT_MTLD_THRESHOLD,
    TokenizedText,
    lexical_diversity,
    readability,
    vocabulary_richness,
)

# Canonical tag order for the 37-dim PoS block: the 36 Penn Treebank
# word-level tags plus the dollar-sign tag from the extended set.
TAGSET: tuple[str, ...] = (
    "$", "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS",
    "MD", "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB",
    "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN",
    "VBP", "VBZ", "WDT", "WP", "WP$", "WRB",
)
_TAG_INDEX = {tag: i for i, tag in enumerate(TAGSET)}

DEFAULT_TAG = "NN"

# Component order of the 8-dim stance vector.
STANCE_FIELDS = ("ttr", "rttr", "cttr", "mtld", "ari", "fkg", "fre", "dcr")

# Column names of the 48-dim classifier vector, in concatenation order;
# the header of the feature CSV export.
FEATURE_NAMES: tuple[str, ...] = (
    tuple(f"pos_{tag}" for tag in TAGSET)
    + ("sentiment",)
    + ("psy_familiarity", "psy_concreteness", "psy_imagability", "psy_aoa")
    + ("rich_honore", "rich_sichel", "rich_brunet", "rich_ttr")
    + ("read_ari", "read_fkg")
)


@dataclass(frozen=True)
class HcfStanceVector:
    """The stance feature vector, ordered per STANCE_FIELDS."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != 8:
            raise ValidationError(f"stance vector must have 8 components, got {len(self.values)}")


@dataclass(frozen=True)
class ClassifierFeatureVector:
    """The 48-dim classifier feature vector.

    Concatenation order: 37 PoS proportions, sentiment, 4 psycholinguistic
    means (familiarity, concreteness, imagability, age-of-acquisition),
    4 richness values (HS, SICH, BM, TTR), 2 readability values (ARI, FKG
    in the FKR slot).
    """

    pos_props: tuple[float, ...]
    sentiment: float
    psycholinguistic: tuple[float, ...]
    richness: tuple[float, ...]
    readability: tuple[float, ...]

    def __post_init__(self):
        for name, field, want in (
            ("pos_props", self.pos_props, 37),
            ("psycholinguistic", self.psycholinguistic, 4),
            ("richness", self.richness, 4),
            ("readability", self.readability, 2),
        ):
            if len(field) != want:
                raise ValidationError(f"{name} must have {want} components, got {len(field)}")

    @property
    def values(self) -> tuple[float, ...]:
        return (
            self.pos_props
            + (self.sentiment,)
            + self.psycholinguistic
            + self.richness
            + self.readability
        )


class TagLexicon:
    """word -> tag map plus priority-ordered suffix rules and a default tag.

    Lookup order per token: exact word, then the first suffix rule whose
    suffix is a strict proper suffix of the token, then the default.
    """

    def __init__(self, words, suffix_rules, default_tag=DEFAULT_TAG):
        for w, tag in words.items():
            if tag not in _TAG_INDEX:
                raise ValidationError("unknown tag in lexicon", record=w, field=tag)
        for suffix, tag in suffix_rules:
            if tag not in _TAG_INDEX:
                raise ValidationError("unknown tag in suffix rule", record=suffix, field=tag)
        if default_tag not in _TAG_INDEX:
            raise ValidationError(f"unknown default tag {default_tag!r}")
        self.words = dict(words)
        self.suffix_rules = list(suffix_rules)
        self.default_tag = default_tag

    @classmethod
    def load(cls, word_path: str | Path, suffix_path: str | Path, default_tag=DEFAULT_TAG):
        words = {}
        for word, tag in _read_tsv_pairs(word_path):
            words[word.lower()] = tag
        suffix_rules = [(s.lower(), tag) for s, tag in _read_tsv_pairs(suffix_path)]
        return cls(words, suffix_rules, default_tag)

    def tag(self, token: str) -> str:
        hit = self.words.get(token)
        if hit is not None:
            return hit
        for suffix, tag in self.suffix_rules:
            if len(token) > len(suffix) and token.endswith(suffix):
                return tag
        return self.default_tag


class AffectLexicons:
    """Sentiment polarities and MRC-style psycholinguistic scores.

    Lookups are case-insensitive; keys are stored lowercased. Psycho rows
    carry (familiarity, concreteness, imagability, aoa); a None entry
    means the attribute is missing for that word and is skipped when
    averaging rather than counted as zero.
    """

    def __init__(self, sentiment, psycho):
        self.sentiment = {w.lower(): float(p) for w, p in sentiment.items()}
        self.psycho = {w.lower(): tuple(scores) for w, scores in psycho.items()}

    @classmethod
    def load(cls, sentiment_path: str | Path, psycho_path: str | Path):
        sentiment = {}
        for word, value in _read_tsv_pairs(sentiment_path):
            try:
                polarity = float(value)
            except ValueError:
                raise ValidationError("polarity is not a number", record=word, field=value)
            if not -1.0 <= polarity <= 1.0:
                raise ValidationError("polarity outside [-1,1]", record=word, field=value)
            sentiment[word] = polarity

        psycho = {}
        with open(psycho_path, encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or len(header) != 5:
                raise ValidationError(f"bad psycholinguistic header in {psycho_path}")
            for row in reader:
                if not row:
                    continue
                if len(row) != 5:
                    raise ValidationError("psycholinguistic row needs 5 fields", record=row[0])
                word = row[0]
                scores = []
                for cell in row[1:]:
                    cell = cell.strip()
                    scores.append(float(cell) if cell else None)
                psycho[word] = tuple(scores)
        return cls(sentiment, psycho)


def _read_tsv_pairs(path):
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValidationError(f"line {lineno} of {path} is not `a<TAB>b`", record=line)
            pairs.append((parts[0], parts[1]))
    return pairs


def stance_vector(
    t: TokenizedText,
    easy_words: frozenset[str] | set[str],
    mtld_threshold: float = DEFAULT_MTLD_THRESHOLD,
) -> HcfStanceVector:
    """Assemble [TTR, RTTR, CTTR, MTLD, ARI, FKG, FRE, DCR] for one text."""
    if t.word_count == 0 or t.sentence_count == 0:
        raise DegenerateTextError("stance vector needs nonempty text with >=1 sentence")
    ld = lexical_diversity(t, mtld_threshold)
    rd = readability(t, easy_words)
    return HcfStanceVector(
        values=(ld.ttr, ld.rttr, ld.cttr, ld.mtld, rd.ari, rd.fkg, rd.fre, rd.dcr)
    )


def pos_proportions(t: TokenizedText, lex: TagLexicon) -> tuple[float, ...]:
    """Per-tag proportion of tokens, over the canonical TAGSET order.

    Empty text yields the all-zero vector; otherwise proportions sum to 1.
    """
    return pos_proportions_from_tags(lex.tag(tok) for tok in t.tokens)


def pos_proportions_from_tags(tags) -> tuple[float, ...]:
    """Proportions from already-assigned tags (escape hatch for externally
    tagged text). Tags outside the canonical set count as the default tag."""
    counts = [0] * len(TAGSET)
    total = 0
    for tag in tags:
        counts[_TAG_INDEX.get(tag, _TAG_INDEX[DEFAULT_TAG])] += 1
        total += 1
    if total == 0:
        return tuple(0.0 for _ in TAGSET)
    return tuple(c / total for c in counts)


def sentiment_score(t: TokenizedText, polarity: Mapping[str, float]) -> float:
    """Mean polarity over tokens present in the sentiment lexicon; 0 when
    nothing matches."""
    hits = [polarity[tok] for tok in t.tokens if tok in polarity]
    if not hits:
        return 0.0
    return sum(hits) / len(hits)


def psycholinguistic_scores(
    t: TokenizedText,
    norms: Mapping[str, tuple[float | None, float | None, float | None, float | None]],
) -> tuple[float, ...]:
    """Per-attribute mean over matched tokens, one value per norm attribute.

    Words absent from the lexicon are skipped (not zero-filled); an
    attribute with no matches at all comes back as 0.
    """
    sums = [0.0, 0.0, 0.0, 0.0]
    counts = [0, 0, 0, 0]
    for tok in t.tokens:
        scores = norms.get(tok)
        if scores is None:
            continue
        for i, s in enumerate(scores):
            if s is not None:
                sums[i] += s
                counts[i] += 1
    return tuple(sums[i] / counts[i] if counts[i] else 0.0 for i in range(4))


def classifier_vector(
    t: TokenizedText,
    tag_lexicon: TagLexicon,
    affect: AffectLexicons,
    easy_words: frozenset[str] | set[str],
    mtld_threshold: float = DEFAULT_MTLD_THRESHOLD,
) -> ClassifierFeatureVector:
    """Assemble the full 48-dim vector in the documented fixed order."""
    if t.word_count == 0 or t.sentence_count == 0:
        raise DegenerateTextError("classifier vector needs nonempty text")
    vr = vocabulary_richness(t)
    rd = readability(t, easy_words)
    return ClassifierFeatureVector(
        pos_props=pos_proportions(t, tag_lexicon),
        sentiment=sentiment_score(t, affect.sentiment),
        psycholinguistic=psycholinguistic_scores(t, affect.psycho),
        richness=(vr.honore_hs, vr.sichel, vr.brunet_w, vr.ttr),
        readability=(rd.ari, rd.fkg),
    )
