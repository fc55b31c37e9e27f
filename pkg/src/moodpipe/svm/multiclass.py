"""One-vs-one multiclass classification over the six expressions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateLabels, DimensionError, EmptyDataset
from .kernels import KernelSpec
from .scaling import Scaler, standardize_apply, standardize_fit
from .smo import BinarySvmModel, TrainConfig, train_binary

EXPRESSIONS = ("Anger", "Disgust", "Fear", "Joy", "Sadness", "Surprise")
CLASS_PAIRS = tuple(
    (EXPRESSIONS[i], EXPRESSIONS[j])
    for i in range(len(EXPRESSIONS))
    for j in range(i + 1, len(EXPRESSIONS))
)  # 15 unordered pairs in canonical order


@dataclass
class MultiClassSvmModel:
    """15 pairwise binary models (absent pairs are None) plus the scaler."""

    scaler: Scaler
    pairs: dict[tuple[str, str], BinarySvmModel | None]
    kernel: KernelSpec
    n_features: int

    def present_classes(self) -> list[str]:
        present = set()
        for (a, b), model in self.pairs.items():
            if model is not None:
                present.update((a, b))
        return [c for c in EXPRESSIONS if c in present]


def _check_labels(labels) -> np.ndarray:
    labels = np.asarray(labels, dtype=object)
    unknown = set(labels) - set(EXPRESSIONS)
    if unknown:
        raise ValueError(f"unknown expression labels: {sorted(unknown)}")
    return labels


def train_multiclass(
    X: np.ndarray,
    labels,
    kernel: KernelSpec | None = None,
    cfg: TrainConfig | None = None,
) -> MultiClassSvmModel:
    """Standardize features and train one binary model per class pair.

    For pair (a, b) in canonical order, class a is the +1 side. Pairs missing
    a class are marked absent and skipped at prediction time.
    """
    cfg = cfg or TrainConfig()
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    labels = _check_labels(labels)
    if len(X) != len(labels):
        raise DimensionError(f"{len(X)} samples but {len(labels)} labels")
    present = [c for c in EXPRESSIONS if c in set(labels)]
    if len(present) < 2:
        raise DegenerateLabels(f"need samples from at least 2 classes, got {present}")
    kernel = kernel or KernelSpec(kind="rbf", gamma=1.0 / X.shape[1])

    scaler = standardize_fit(X)
    Z = standardize_apply(scaler, X)

    pairs: dict[tuple[str, str], BinarySvmModel | None] = {}
    for a, b in CLASS_PAIRS:
        sel = (labels == a) | (labels == b)
        if not ((labels == a).any() and (labels == b).any()):
            pairs[(a, b)] = None
            continue
        y = np.where(labels[sel] == a, 1.0, -1.0)
        pairs[(a, b)] = train_binary(Z[sel], y, kernel, cfg)
    return MultiClassSvmModel(scaler, pairs, kernel, X.shape[1])


def pairwise_scores(model: MultiClassSvmModel, x: np.ndarray) -> dict[tuple[str, str], float]:
    """Decision value of every present pair for one standardized input."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size != model.n_features:
        raise DimensionError(f"expected dimension {model.n_features}, got {x.size}")
    z = standardize_apply(model.scaler, x)[None, :]
    return {
        pair: float(m.decision_function(z)[0])
        for pair, m in model.pairs.items()
        if m is not None
    }


def predict_expression(model: MultiClassSvmModel, x: np.ndarray) -> tuple[str, dict[str, int]]:
    """Majority vote over the pairwise models.

    Ties are broken by the largest sum of |decision value| over the pairs
    between tied classes, then by canonical class order, so the result is
    deterministic.
    """
    scores = pairwise_scores(model, x)
    tally = {c: 0 for c in model.present_classes()}
    for (a, b), f in scores.items():
        tally[a if f > 0 else b] += 1
    top = max(tally.values())
    tied = [c for c in tally if tally[c] == top]
    if len(tied) == 1:
        return tied[0], tally
    strength = {
        c: sum(
            abs(f)
            for (a, b), f in scores.items()
            if (a == c and b in tied) or (b == c and a in tied)
        )
        for c in tied
    }
    winner = max(tied, key=lambda c: (strength[c], -EXPRESSIONS.index(c)))
    return winner, tally


def predict_many(model: MultiClassSvmModel, X: np.ndarray) -> list[str]:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return [predict_expression(model, row)[0] for row in X]


@dataclass
class EvalReport:
    """Per-class accuracy, confusion counts and the unweighted average."""

    per_class: dict[str, tuple[int, int]]  # class -> (correct, total)
    confusion: np.ndarray  # 6x6, rows = true class in canonical order
    average: float

    def accuracy(self, cls: str) -> float:
        correct, total = self.per_class[cls]
        return correct / total if total else float("nan")


def evaluate(model: MultiClassSvmModel, X: np.ndarray, labels) -> EvalReport:
    """Per-class accuracy table mirroring the canonical class order."""
    labels = _check_labels(labels)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if len(X) == 0:
        raise EmptyDataset("evaluation set is empty")
    if len(X) != len(labels):
        raise DimensionError(f"{len(X)} samples but {len(labels)} labels")
    confusion = np.zeros((len(EXPRESSIONS), len(EXPRESSIONS)), dtype=np.int64)
    per_class = {c: [0, 0] for c in EXPRESSIONS if c in set(labels)}
    for row, truth in zip(X, labels):
        pred, _ = predict_expression(model, row)
        confusion[EXPRESSIONS.index(truth), EXPRESSIONS.index(pred)] += 1
        per_class[truth][1] += 1
        if pred == truth:
            per_class[truth][0] += 1
    accuracies = [c / t for c, t in per_class.values() if t]
    average = float(np.mean(accuracies)) if accuracies else float("nan")
    return EvalReport({c: (v[0], v[1]) for c, v in per_class.items()}, confusion, average)
