"""Fixed-width article embeddings.

The default encoder needs no model weights: every token hashes to a fixed
pseudo-random direction and an article embeds as the normalized mean of
its token directions. A pretrained transformer with 768-wide hidden
states can be substituted when its weights are on disk; loading one
without weights raises SetupError instead of downloading anything.
"""
from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Iterable, Protocol

import numpy as np

from .errors import DataError, SetupError
from .preprocess import PreprocessedArticle

EMBEDDING_DIM = 768


class Encoder(Protocol):
    dim: int

    def encode(self, article: PreprocessedArticle) -> np.ndarray: ...


def _token_direction(token: str, dim: int) -> np.ndarray:
    # sha256, not hash(): per-process salting would break cross-run determinism
    seed = int.from_bytes(hashlib.sha256(token.encode("utf-8")).digest()[:8], "big")
    return np.random.default_rng(seed).standard_normal(dim)


class HashingEncoder:
    """Deterministic weight-free encoder.

    Each distinct token maps to one fixed direction; the article vector
    is the mean over its content tokens, scaled to unit length.
    """

    def __init__(self, dim: int = EMBEDDING_DIM):
        if dim < 1:
            raise DataError(f"embedding dimension must be positive, got {dim}")
        self.dim = dim
        self._directions: dict[str, np.ndarray] = {}

    def encode(self, article: PreprocessedArticle) -> np.ndarray:
        rows = []
        for tok in article.tokens:
            vec = self._directions.get(tok)
            if vec is None:
                vec = _token_direction(tok, self.dim)
                self._directions[tok] = vec
            rows.append(vec)
        mean = np.mean(rows, axis=0)
        norm = float(np.linalg.norm(mean))
        return mean / norm if norm > 0.0 else mean


class PretrainedEncoder:
    """Transformer encoder loaded from a local weights directory.

    Embeds the marked-up article text and mean-pools the final hidden
    states. The checkpoint must emit 768-wide states.
    """

    def __init__(self, weights_dir: str | Path):
        path = Path(weights_dir)
        if not path.is_dir() or not (path / "config.json").is_file():
            raise SetupError(
                f"no encoder weights at {path}; point at a local pretrained model directory")
        try:
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise SetupError(f"pretrained encoding needs the transformers package: {exc}")
        self._tokenizer = AutoTokenizer.from_pretrained(str(path))
        self._model = AutoModel.from_pretrained(str(path)).eval()
        hidden = int(self._model.config.hidden_size)
        if hidden != EMBEDDING_DIM:
            raise SetupError(f"encoder emits {hidden}-wide states, need {EMBEDDING_DIM}")
        self.dim = EMBEDDING_DIM

    def encode(self, article: PreprocessedArticle) -> np.ndarray:
        import torch

        batch = self._tokenizer(article.text, return_tensors="pt", truncation=True)
        with torch.no_grad():
            states = self._model(**batch).last_hidden_state
        return states.mean(dim=1).squeeze(0).numpy().astype(float)


def embed(article: PreprocessedArticle, encoder: Encoder | None = None) -> np.ndarray:
    """Embed one article; shape (encoder.dim,), 768 by default."""
    enc = encoder if encoder is not None else HashingEncoder()
    vec = np.asarray(enc.encode(article), dtype=float)
    if vec.shape != (enc.dim,):
        raise DataError(f"encoder produced shape {vec.shape}, expected ({enc.dim},)")
    return vec


def embed_all(articles: Iterable[PreprocessedArticle],
              encoder: Encoder | None = None) -> np.ndarray:
    """Stack article embeddings into a (count, dim) matrix, in input order."""
    enc = encoder if encoder is not None else HashingEncoder()
    rows = [embed(a, enc) for a in articles]
    if not rows:
        raise DataError("no articles to embed")
    return np.stack(rows)
