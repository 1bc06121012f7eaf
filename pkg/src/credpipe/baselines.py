"""Classical classifiers over the 48-dim feature vectors: logistic
regression, a Gini decision tree, and gradient boosting, plus the
shuffled 5-fold evaluation protocol.

All training is deterministic: logistic regression starts from zeros,
tree splits break ties by lowest feature index then lowest threshold,
and the fold shuffle is seeded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, ValidationError

MODEL_FORMAT = "credpipe-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if x.ndim != 2:
            raise ValidationError(f"X must be 2-D, got shape {x.shape}")
        if y.ndim != 1:
            raise ValidationError(f"y must be 1-D, got shape {y.shape}")
        if x.shape[0] != y.shape[0]:
            raise DimensionMismatchError(
                f"X has {x.shape[0]} rows but y has {y.shape[0]} labels"
            )
        if not np.all(np.isfinite(x)):
            raise ValidationError("X contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def classes(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.unique(self.y))

    def subset(self, idx: Sequence[int]) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return Dataset(self.x[idx], self.y[idx])


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class LogisticRegressionModel:
    """One-vs-rest logistic regression with internal standardization.
    Prediction is the argmax class score, ties to the smaller label."""

    classes: tuple[int, ...]
    mean: np.ndarray
    std: np.ndarray
    weights: np.ndarray
    bias: np.ndarray

    def _scores(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.weights.shape[1]:
            raise DimensionMismatchError(
                f"expected (n, {self.weights.shape[1]}) input, got {x.shape}"
            )
        z = (x - self.mean) / self.std
        return z @ self.weights.T + self.bias

    def predict(self, x: np.ndarray) -> np.ndarray:
        scores = self._scores(x)
        best = np.argmax(scores, axis=1)
        return np.asarray(self.classes, dtype=int)[best]

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _sigmoid(self._scores(x))


def train_logreg(
    d: Dataset,
    lr: float = 0.1,
    epochs: int = 300,
    l2: float = 0.0,
) -> LogisticRegressionModel:
    """Full-batch gradient descent on the cross-entropy, one binary
    problem per class, weights initialized to zeros."""
    classes = d.classes
    if len(classes) < 2:
        raise ValidationError("logistic regression needs at least two classes")
    if lr <= 0 or epochs < 1 or l2 < 0:
        raise ValidationError(f"bad hyperparameters lr={lr} epochs={epochs} l2={l2}")

    mean = d.x.mean(axis=0)
    std = d.x.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    z = (d.x - mean) / std
    n = d.n

    weights = np.zeros((len(classes), z.shape[1]))
    bias = np.zeros(len(classes))
    for ci, c in enumerate(classes):
        t = (d.y == c).astype(float)
        w = weights[ci]
        b = 0.0
        for _ in range(epochs):
            p = _sigmoid(z @ w + b)
            err = p - t
            grad_w = z.T @ err / n + l2 * w
            grad_b = float(err.mean())
            w -= lr * grad_w
            b -= lr * grad_b
        bias[ci] = b
    return LogisticRegressionModel(
        classes=classes, mean=mean, std=std, weights=weights, bias=bias
    )


@dataclass(frozen=True)
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float = 0.0
    label: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _route(node: TreeNode, row: np.ndarray) -> TreeNode:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node


def _split_candidates(
    xs: np.ndarray, order: np.ndarray, min_leaf: int
) -> np.ndarray:
    """Positions i (0-based) where a split between order[i] and order[i+1]
    is legal: distinct values on both sides and min_leaf respected."""
    n = len(order)
    sorted_vals = xs[order]
    boundary = sorted_vals[:-1] != sorted_vals[1:]
    pos = np.arange(n - 1)
    legal = boundary & (pos + 1 >= min_leaf) & (n - pos - 1 >= min_leaf)
    return pos[legal]


def _best_gini_split(
    x: np.ndarray, y_idx: np.ndarray, n_classes: int, min_leaf: int
) -> tuple[float, int, float] | None:
    """Best (impurity, feature, threshold) or None; exact lexicographic
    tie-break via tuple comparison."""
    n = len(y_idx)
    one_hot = np.eye(n_classes)[y_idx]
    total = one_hot.sum(axis=0)
    best: tuple[float, int, float] | None = None
    for f in range(x.shape[1]):
        xs = x[:, f]
        order = np.argsort(xs, kind="stable")
        cand = _split_candidates(xs, order, min_leaf)
        if cand.size == 0:
            continue
        cum = np.cumsum(one_hot[order], axis=0)
        left = cum[cand]
        right = total - left
        nl = (cand + 1).astype(float)
        nr = n - nl
        gini_l = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gini_r = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
        imp = (nl * gini_l + nr * gini_r) / n
        sorted_vals = xs[order]
        thresholds = (sorted_vals[cand] + sorted_vals[cand + 1]) / 2.0
        fi = int(np.argmin(imp))
        best_imp = imp[fi]
        ties = np.flatnonzero(imp == best_imp)
        thr = float(thresholds[ties].min())
        candidate = (float(best_imp), f, thr)
        if best is None or candidate < best:
            best = candidate
    return best


def _majority_label(y: np.ndarray, classes: tuple[int, ...]) -> int:
    counts = {c: int(np.sum(y == c)) for c in classes}
    return min(classes, key=lambda c: (-counts[c], c))


def _build_gini_tree(
    x: np.ndarray,
    y: np.ndarray,
    classes: tuple[int, ...],
    depth: int,
    max_depth: int,
    min_leaf: int,
) -> TreeNode:
    class_index = {c: i for i, c in enumerate(classes)}
    y_idx = np.asarray([class_index[int(v)] for v in y], dtype=int)
    if depth >= max_depth or len(np.unique(y_idx)) == 1 or len(y) < 2 * min_leaf:
        return TreeNode(label=_majority_label(y, classes))
    # Zero-improvement splits are taken (a deeper level may still purify,
    # as in XOR); only a node with no legal candidate becomes a leaf.
    split = _best_gini_split(x, y_idx, len(classes), min_leaf)
    if split is None:
        return TreeNode(label=_majority_label(y, classes))
    _, f, thr = split
    mask = x[:, f] <= thr
    return TreeNode(
        feature=f,
        threshold=thr,
        left=_build_gini_tree(x[mask], y[mask], classes, depth + 1, max_depth, min_leaf),
        right=_build_gini_tree(x[~mask], y[~mask], classes, depth + 1, max_depth, min_leaf),
    )


@dataclass(frozen=True)
class DecisionTreeModel:
    classes: tuple[int, ...]
    root: TreeNode
    n_features: int

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise DimensionMismatchError(
                f"expected (n, {self.n_features}) input, got {x.shape}"
            )
        return np.asarray([_route(self.root, row).label for row in x], dtype=int)


def train_tree(d: Dataset, max_depth: int = 8, min_leaf: int = 1) -> DecisionTreeModel:
    """Greedy CART on Gini impurity; splits at midpoints between distinct
    sorted values."""
    if d.n == 0:
        raise ValidationError("cannot train a tree on an empty dataset")
    if max_depth < 1 or min_leaf < 1:
        raise ValidationError(f"bad hyperparameters max_depth={max_depth} min_leaf={min_leaf}")
    root = _build_gini_tree(d.x, d.y, d.classes, 0, max_depth, min_leaf)
    return DecisionTreeModel(classes=d.classes, root=root, n_features=d.x.shape[1])


def _best_sse_split(
    x: np.ndarray, r: np.ndarray, min_leaf: int
) -> tuple[float, int, float] | None:
    """Best squared-error split on a regression target, same tie-break
    discipline as the Gini splitter."""
    n = len(r)
    best: tuple[float, int, float] | None = None
    for f in range(x.shape[1]):
        xs = x[:, f]
        order = np.argsort(xs, kind="stable")
        cand = _split_candidates(xs, order, min_leaf)
        if cand.size == 0:
            continue
        rs = r[order]
        cum1 = np.cumsum(rs)
        cum2 = np.cumsum(rs ** 2)
        s1_l = cum1[cand]
        s2_l = cum2[cand]
        nl = (cand + 1).astype(float)
        s1_r = cum1[-1] - s1_l
        s2_r = cum2[-1] - s2_l
        nr = n - nl
        sse = (s2_l - s1_l ** 2 / nl) + (s2_r - s1_r ** 2 / nr)
        sorted_vals = xs[order]
        thresholds = (sorted_vals[cand] + sorted_vals[cand + 1]) / 2.0
        fi = int(np.argmin(sse))
        best_sse = sse[fi]
        ties = np.flatnonzero(sse == best_sse)
        thr = float(thresholds[ties].min())
        candidate = (float(best_sse), f, thr)
        if best is None or candidate < best:
            best = candidate
    return best


def _build_regression_tree(
    x: np.ndarray,
    r: np.ndarray,
    idx: np.ndarray,
    depth: int,
    max_depth: int,
    min_leaf: int,
    leaves: list[tuple[np.ndarray, list]],
) -> dict:
    """Split structure as nested dicts; leaves collect their sample
    indices so the caller can assign Newton values."""
    if depth >= max_depth or len(idx) < 2 * min_leaf:
        node = {"value": 0.0}
        leaves.append((idx, node))
        return node
    split = _best_sse_split(x[idx], r[idx], min_leaf)
    if split is None:
        node = {"value": 0.0}
        leaves.append((idx, node))
        return node
    _, f, thr = split
    mask = x[idx, f] <= thr
    return {
        "feature": f,
        "threshold": thr,
        "left": _build_regression_tree(x, r, idx[mask], depth + 1, max_depth, min_leaf, leaves),
        "right": _build_regression_tree(x, r, idx[~mask], depth + 1, max_depth, min_leaf, leaves),
    }


def _route_dict(node: dict, row: np.ndarray) -> float:
    while "value" not in node:
        node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
    return node["value"]


@dataclass(frozen=True)
class GradientBoostModel:
    """Stage-wise additive logistic boosting; trees predict log-odds
    increments, leaf values are Newton steps."""

    classes: tuple[int, int]
    f0: float
    shrinkage: float
    trees: tuple[dict, ...]
    n_features: int
    train_losses: tuple[float, ...] = field(default=())

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise DimensionMismatchError(
                f"expected (n, {self.n_features}) input, got {x.shape}"
            )
        f = np.full(x.shape[0], self.f0)
        for tree in self.trees:
            f += self.shrinkage * np.asarray([_route_dict(tree, row) for row in x])
        return f

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_function(x))

    def predict(self, x: np.ndarray) -> np.ndarray:
        p = self.predict_proba(x)
        lo, hi = self.classes
        return np.where(p >= 0.5, hi, lo)


def _log_loss(t: np.ndarray, p: np.ndarray) -> float:
    eps = 1e-12
    p = np.clip(p, eps, 1 - eps)
    return float(-(t * np.log(p) + (1 - t) * np.log(1 - p)).mean())


def train_boost(
    d: Dataset,
    n_rounds: int = 50,
    shrinkage: float = 0.1,
    depth: int = 2,
    min_leaf: int = 1,
) -> GradientBoostModel:
    """Gradient boosting on the logistic loss for binary labels. Each
    round fits a shallow regression tree to the residual (label minus
    probability) and sets leaf values by a Newton step."""
    classes = d.classes
    if len(classes) != 2:
        raise ValidationError(f"boosting needs exactly two classes, got {classes}")
    if n_rounds < 1 or shrinkage <= 0 or depth < 1:
        raise ValidationError(
            f"bad hyperparameters n_rounds={n_rounds} shrinkage={shrinkage} depth={depth}"
        )
    lo, hi = classes
    t = (d.y == hi).astype(float)
    base = float(t.mean())
    f0 = float(np.log(base / (1.0 - base)))

    f = np.full(d.n, f0)
    trees: list[dict] = []
    losses: list[float] = []
    all_idx = np.arange(d.n)
    for _ in range(n_rounds):
        p = _sigmoid(f)
        residual = t - p
        hessian = p * (1.0 - p)
        leaves: list[tuple[np.ndarray, dict]] = []
        root = _build_regression_tree(d.x, residual, all_idx, 0, depth, min_leaf, leaves)
        for idx, node in leaves:
            denom = float(hessian[idx].sum())
            node["value"] = float(residual[idx].sum()) / denom if denom > 1e-12 else 0.0
        trees.append(root)
        f = f + shrinkage * np.asarray([_route_dict(root, row) for row in d.x])
        losses.append(_log_loss(t, _sigmoid(f)))

    return GradientBoostModel(
        classes=(lo, hi),
        f0=f0,
        shrinkage=shrinkage,
        trees=tuple(trees),
        n_features=d.x.shape[1],
        train_losses=tuple(losses),
    )


def binary_metrics(y_true: np.ndarray, y_pred: np.ndarray, positive: int) -> dict[str, float]:
    tp = int(np.sum((y_pred == positive) & (y_true == positive)))
    fp = int(np.sum((y_pred == positive) & (y_true != positive)))
    fn = int(np.sum((y_pred != positive) & (y_true == positive)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {
        "accuracy": float(np.mean(y_true == y_pred)),
        "precision": precision,
        "recall": recall,
        "f_score": f_score,
    }


def macro_metrics(
    y_true: np.ndarray, y_pred: np.ndarray, classes: Sequence[int]
) -> dict[str, float]:
    per_class = [binary_metrics(y_true, y_pred, c) for c in classes]
    return {
        "accuracy": float(np.mean(y_true == y_pred)),
        "precision": float(np.mean([m["precision"] for m in per_class])),
        "recall": float(np.mean([m["recall"] for m in per_class])),
        "f_score": float(np.mean([m["f_score"] for m in per_class])),
    }


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    f_score: float
    precision: float
    recall: float
    per_fold: tuple[dict[str, float], ...]

    def to_json_dict(self) -> dict:
        return {
            "Accuracy": self.accuracy,
            "F Score": self.f_score,
            "Precision": self.precision,
            "Recall": self.recall,
            "folds": [dict(sorted(f.items())) for f in self.per_fold],
        }


def evaluate(
    trainer: Callable[[Dataset], object],
    d: Dataset,
    folds: int = 5,
    seed: int = 0,
) -> EvalReport:
    """Seeded shuffled K-fold cross-validation (each fold a 1/folds
    holdout, trained on the rest). The trainer is called once per fold;
    binary data uses the larger label as positive class, three or more
    classes are macro-averaged.

    The shuffle is applied over a canonical row ordering (lexicographic
    by features, then label), so the report depends only on the data
    multiset and seed, not on input record order."""
    if folds < 2:
        raise ValidationError(f"folds must be >= 2, got {folds}")
    classes = d.classes
    if len(classes) < 2:
        raise ValidationError("evaluation needs at least two classes")
    for c in classes:
        count = int(np.sum(d.y == c))
        if count < folds:
            raise ValidationError(
                f"class {c} has only {count} samples for {folds} folds"
            )

    rng = np.random.default_rng(seed)
    keys = (d.y,) + tuple(d.x[:, f] for f in reversed(range(d.x.shape[1])))
    canonical = np.lexsort(keys)
    perm = canonical[rng.permutation(d.n)]
    sizes = [d.n // folds + (1 if i < d.n % folds else 0) for i in range(folds)]

    per_fold: list[dict[str, float]] = []
    start = 0
    for size in sizes:
        test_idx = perm[start:start + size]
        train_idx = np.concatenate([perm[:start], perm[start + size:]])
        start += size
        model = trainer(d.subset(train_idx))
        test = d.subset(test_idx)
        y_pred = model.predict(test.x)
        if len(classes) == 2:
            metrics = binary_metrics(test.y, y_pred, positive=classes[1])
        else:
            metrics = macro_metrics(test.y, y_pred, classes)
        per_fold.append(metrics)

    return EvalReport(
        accuracy=float(np.mean([m["accuracy"] for m in per_fold])),
        f_score=float(np.mean([m["f_score"] for m in per_fold])),
        precision=float(np.mean([m["precision"] for m in per_fold])),
        recall=float(np.mean([m["recall"] for m in per_fold])),
        per_fold=tuple(per_fold),
    )


def _tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"label": node.label}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _tree_to_dict(node.left),
        "right": _tree_to_dict(node.right),
    }


def _tree_from_dict(obj: dict) -> TreeNode:
    if "label" in obj:
        return TreeNode(label=int(obj["label"]))
    return TreeNode(
        feature=int(obj["feature"]),
        threshold=float(obj["threshold"]),
        left=_tree_from_dict(obj["left"]),
        right=_tree_from_dict(obj["right"]),
    )


def model_to_dict(model) -> dict:
    head = {"format": MODEL_FORMAT, "version": MODEL_VERSION}
    if isinstance(model, LogisticRegressionModel):
        return {
            **head,
            "kind": "logreg",
            "classes": list(model.classes),
            "mean": model.mean.tolist(),
            "std": model.std.tolist(),
            "weights": model.weights.tolist(),
            "bias": model.bias.tolist(),
        }
    if isinstance(model, DecisionTreeModel):
        return {
            **head,
            "kind": "tree",
            "classes": list(model.classes),
            "n_features": model.n_features,
            "root": _tree_to_dict(model.root),
        }
    if isinstance(model, GradientBoostModel):
        return {
            **head,
            "kind": "boost",
            "classes": list(model.classes),
            "f0": model.f0,
            "shrinkage": model.shrinkage,
            "n_features": model.n_features,
            "trees": list(model.trees),
        }
    raise ValidationError(f"cannot serialize model of type {type(model).__name__}")


def model_from_dict(obj: dict):
    if obj.get("format") != MODEL_FORMAT:
        raise ValidationError("not a recognized model file")
    if obj.get("version") != MODEL_VERSION:
        raise ValidationError(f"unsupported model version {obj.get('version')!r}")
    kind = obj.get("kind")
    if kind == "logreg":
        return LogisticRegressionModel(
            classes=tuple(int(c) for c in obj["classes"]),
            mean=np.asarray(obj["mean"], dtype=float),
            std=np.asarray(obj["std"], dtype=float),
            weights=np.asarray(obj["weights"], dtype=float),
            bias=np.asarray(obj["bias"], dtype=float),
        )
    if kind == "tree":
        return DecisionTreeModel(
            classes=tuple(int(c) for c in obj["classes"]),
            root=_tree_from_dict(obj["root"]),
            n_features=int(obj["n_features"]),
        )
    if kind == "boost":
        return GradientBoostModel(
            classes=tuple(int(c) for c in obj["classes"]),  # type: ignore[arg-type]
            f0=float(obj["f0"]),
            shrinkage=float(obj["shrinkage"]),
            trees=tuple(obj["trees"]),
            n_features=int(obj["n_features"]),
        )
    raise ValidationError(f"unknown model kind {kind!r}")


def save_model(path: str | Path, model) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model_to_dict(model), f, sort_keys=True, separators=(",", ":"))
        f.write("\n")


def load_model(path: str | Path):
    with open(path, encoding="utf-8") as f:
        return model_from_dict(json.load(f))
