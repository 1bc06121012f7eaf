"""Full-batch SGD training and the metrics report for the toy classifiers."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import torch
from torch import nn

from .errors import DataError, TrainingError
from .model import AttentionClassifier, LstmClassifier, ModelConfig

ARCHITECTURES = {
    "attention": AttentionClassifier,
    "lstm": LstmClassifier,
}


def standardize(features) -> np.ndarray:
    """Scale each column to zero mean and unit variance.

    Raw feature exports mix scales that differ by orders of magnitude,
    which plain SGD cannot survive; scale them before training. Constant
    columns come out as zeros.
    """
    x = np.asarray(features, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise DataError(f"expected a (rows, columns) matrix, got shape {x.shape}")
    std = x.std(axis=0)
    std[std == 0.0] = 1.0
    return (x - x.mean(axis=0)) / std


@dataclass(frozen=True)
class TrainResult:
    """Fitted model plus its loss curve and training-set predictions."""

    model: nn.Module
    losses: tuple[float, ...]
    predictions: tuple[int, ...]
    accuracy: float


def train_toy(features, labels, cfg: ModelConfig = ModelConfig(),
              architecture: str = "attention") -> TrainResult:
    """Fit one classifier on a small labeled matrix with plain SGD.

    Every step is full batch: the whole matrix is one forward pass, which
    for the attention variant is exactly the row-coupled configuration it
    predicts in. Both class labels 0 and 1 must be present. The returned
    curve holds the cross-entropy before each step plus the final value,
    so `losses[0]` is ln 2 thanks to the zero-initialized head. A loss
    that stops being finite raises TrainingError.
    """
    if architecture not in ARCHITECTURES:
        raise DataError(f"unknown architecture {architecture!r}, "
                        f"expected one of {sorted(ARCHITECTURES)}")
    x = torch.as_tensor(np.asarray(features, dtype=np.float32))
    y_values = [int(v) for v in np.asarray(labels).ravel()]
    if x.ndim != 2 or x.shape[0] != len(y_values):
        raise DataError(
            f"features {tuple(x.shape)} and {len(y_values)} labels do not line up")
    present = sorted(set(y_values))
    if present != [0, 1]:
        raise DataError(f"training needs both classes 0 and 1, got {present}")
    y = torch.as_tensor(y_values, dtype=torch.long)

    torch.manual_seed(cfg.seed)
    model = ARCHITECTURES[architecture](x.shape[1], cfg)
    optimizer = torch.optim.SGD(model.parameters(), lr=cfg.lr)

    losses = []
    for step in range(cfg.steps):
        optimizer.zero_grad()
        loss = nn.functional.cross_entropy(model.logits(x), y)
        value = float(loss.item())
        if not math.isfinite(value):
            raise TrainingError(
                f"loss became {value} at step {step} (lr={cfg.lr}, "
                f"architecture={architecture})")
        losses.append(value)
        loss.backward()
        optimizer.step()

    model.eval()
    with torch.no_grad():
        final = float(nn.functional.cross_entropy(model.logits(x), y).item())
        if not math.isfinite(final):
            raise TrainingError(
                f"loss became {final} after the last step (lr={cfg.lr}, "
                f"architecture={architecture})")
        losses.append(final)
        predicted = model(x).argmax(dim=1)
        accuracy = float((predicted == y).to(torch.float64).mean().item())
    return TrainResult(model, tuple(losses), tuple(int(p) for p in predicted), accuracy)


def classification_report(y_true: Sequence[int], y_pred: Sequence[int],
                          method: str) -> dict:
    """Accuracy plus macro precision/recall/F over the two classes.

    Keys follow the benchmark table columns: Method, Accuracy, F Score,
    Precision, Recall.
    """
    if len(y_true) != len(y_pred):
        raise DataError(f"{len(y_true)} labels against {len(y_pred)} predictions")
    if not y_true:
        raise DataError("nothing to score")
    pairs = list(zip((int(v) for v in y_true), (int(v) for v in y_pred)))
    accuracy = sum(t == p for t, p in pairs) / len(pairs)
    precisions, recalls, fscores = [], [], []
    for cls in range(2):
        tp = sum(1 for t, p in pairs if t == cls and p == cls)
        fp = sum(1 for t, p in pairs if t != cls and p == cls)
        fn = sum(1 for t, p in pairs if t == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        precisions.append(precision)
        recalls.append(recall)
        fscores.append(f)
    return {
        "Method": method,
        "Accuracy": accuracy,
        "F Score": sum(fscores) / 2,
        "Precision": sum(precisions) / 2,
        "Recall": sum(recalls) / 2,
    }
