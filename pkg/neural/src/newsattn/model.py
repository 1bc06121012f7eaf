"""Attention and recurrent classifiers over fixed-width article vectors.

The attention variant treats the stacked batch of article vectors as one
sequence: rows attend to each other through a stack of multi-head
attention layers, a learned query pools the contextualized rows into a
shared context vector, and a linear head scores each row alongside that
context. Predictions for a row therefore depend on the rest of the batch
by construction. The recurrent variant reads each row's values one at a
time through a single LSTM layer and classifies from the final hidden
state, so its rows are independent.

`forward` returns per-class probabilities (softmax rows). Training and
gradient checking use `logits` so the cross-entropy stays numerically
stable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import torch
from torch import nn

from .errors import DataError, DimensionError

N_CLASSES = 2


@dataclass(frozen=True)
class ModelConfig:
    """Architecture and optimizer settings shared by both classifiers."""

    mha_layers: int = 6
    heads: int = 4
    hidden_dim: int = 64
    dropout: float = 0.0
    lr: float = 0.1
    steps: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.mha_layers < 1:
            raise DataError(f"mha_layers must be at least 1, got {self.mha_layers}")
        if self.heads < 1:
            raise DataError(f"heads must be at least 1, got {self.heads}")
        if self.hidden_dim < 1 or self.hidden_dim % self.heads != 0:
            raise DataError(
                f"hidden_dim must be positive and divisible by heads, "
                f"got {self.hidden_dim} with {self.heads} heads")
        if not 0.0 <= self.dropout < 1.0:
            raise DataError(f"dropout must lie in [0, 1), got {self.dropout}")
        if self.lr <= 0.0:
            raise DataError(f"lr must be positive, got {self.lr}")
        if self.steps < 1:
            raise DataError(f"steps must be at least 1, got {self.steps}")


def _as_matrix(value, expected_width: int, dtype: torch.dtype) -> torch.Tensor:
    t = value if torch.is_tensor(value) else torch.as_tensor(value)
    if t.ndim != 2 or t.shape[0] < 1:
        raise DimensionError(
            f"expected a nonempty (batch, features) matrix, got shape {tuple(t.shape)}")
    if t.shape[1] != expected_width:
        raise DimensionError(
            f"expected {expected_width} features per row, got {t.shape[1]}")
    return t.to(dtype)


class _AttentionBlock(nn.Module):
    def __init__(self, dim: int, heads: int, dropout: float):
        super().__init__()
        self.attn = nn.MultiheadAttention(dim, heads, dropout=dropout, batch_first=True)
        self.norm = nn.LayerNorm(dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        mixed, _ = self.attn(x, x, x, need_weights=False)
        return self.norm(x + mixed)


class AttentionClassifier(nn.Module):
    """Stacked self-attention over batch rows with learned-query pooling."""

    def __init__(self, input_dim: int, cfg: ModelConfig = ModelConfig()):
        super().__init__()
        if input_dim < 1:
            raise DataError(f"input_dim must be positive, got {input_dim}")
        self.input_dim = input_dim
        self.cfg = cfg
        self.proj = nn.Linear(input_dim, cfg.hidden_dim)
        self.blocks = nn.ModuleList(
            _AttentionBlock(cfg.hidden_dim, cfg.heads, cfg.dropout)
            for _ in range(cfg.mha_layers))
        self.query = nn.Parameter(torch.randn(cfg.hidden_dim) / math.sqrt(cfg.hidden_dim))
        self.head = nn.Linear(2 * cfg.hidden_dim, N_CLASSES)
        # zero head: every class equally likely before the first update
        nn.init.zeros_(self.head.weight)
        nn.init.zeros_(self.head.bias)

    def logits(self, matrix) -> torch.Tensor:
        x = _as_matrix(matrix, self.input_dim, self.proj.weight.dtype)
        h = self.proj(x).unsqueeze(0)
        for block in self.blocks:
            h = block(h)
        h = h.squeeze(0)
        scores = (h @ self.query) / math.sqrt(h.shape[1])
        weights = torch.softmax(scores, dim=0)
        context = (weights.unsqueeze(1) * h).sum(dim=0)
        paired = torch.cat([h, context.expand_as(h)], dim=1)
        return self.head(paired)

    def forward(self, matrix) -> torch.Tensor:
        """Per-class probabilities, shape (batch, 2); every row sums to 1."""
        return torch.softmax(self.logits(matrix), dim=1)


class LstmClassifier(nn.Module):
    """Single-layer LSTM reading each feature vector one value at a time."""

    def __init__(self, input_dim: int, cfg: ModelConfig = ModelConfig()):
        super().__init__()
        if input_dim < 1:
            raise DataError(f"input_dim must be positive, got {input_dim}")
        self.input_dim = input_dim
        self.cfg = cfg
        self.lstm = nn.LSTM(1, cfg.hidden_dim, num_layers=1, batch_first=True)
        self.head = nn.Linear(cfg.hidden_dim, N_CLASSES)
        nn.init.zeros_(self.head.weight)
        nn.init.zeros_(self.head.bias)

    def logits(self, matrix) -> torch.Tensor:
        x = _as_matrix(matrix, self.input_dim, self.head.weight.dtype)
        sequence = x.unsqueeze(2)
        _, (last_hidden, _) = self.lstm(sequence)
        return self.head(last_hidden[-1])

    def forward(self, matrix) -> torch.Tensor:
        """Per-class probabilities, shape (batch, 2); every row sums to 1."""
        return torch.softmax(self.logits(matrix), dim=1)


def max_relative_grad_error(model: nn.Module, x, y, eps: float = 1e-5) -> float:
    """Compare analytic and central finite-difference gradients.

    Runs the cross-entropy loss of `model.logits(x)` against labels `y`,
    backpropagates once, then perturbs every parameter coordinate by
    +/- eps and returns the worst relative gap between the two gradient
    estimates. The model is switched to float64 and eval mode in place.
    """
    model.double().eval()
    x = torch.as_tensor(x, dtype=torch.float64)
    y = torch.as_tensor(y, dtype=torch.long)

    def loss_value() -> torch.Tensor:
        return nn.functional.cross_entropy(model.logits(x), y)

    model.zero_grad()
    loss_value().backward()
    worst = 0.0
    with torch.no_grad():
        for param in model.parameters():
            if param.grad is None:
                continue
            flat = param.view(-1)
            grad = param.grad.view(-1)
            for i in range(flat.numel()):
                original = flat[i].item()
                flat[i] = original + eps
                upper = loss_value().item()
                flat[i] = original - eps
                lower = loss_value().item()
                flat[i] = original
                estimate = (upper - lower) / (2.0 * eps)
                analytic = grad[i].item()
                scale = max(1.0, abs(estimate), abs(analytic))
                worst = max(worst, abs(estimate - analytic) / scale)
    return worst
