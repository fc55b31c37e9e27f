"""Scikit-learn style estimator wrappers around the SVM trainers.

These compose with sklearn tooling (``clone``, pipelines, grid search) via
``get_params``/``set_params`` inherited from ``BaseEstimator``; the underlying
optimization is this package's own SMO implementation.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .kernels import KernelSpec
from .multiclass import (
    evaluate,
    predict_expression,
    predict_many,
    train_multiclass,
)
from .persistence import load_model, save_model
from .smo import TrainConfig, train_binary


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"expected a 2-d sample matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("sample matrix contains non-finite values")
    return X


def _kernel_spec(kernel: str, degree: int, coef0: float, gamma, n_features: int) -> KernelSpec:
    if kernel == "rbf":
        g = 1.0 / n_features if gamma is None else float(gamma)
        return KernelSpec(kind="rbf", gamma=g)
    if kernel == "polynomial":
        return KernelSpec(kind="polynomial", degree=degree, coef0=coef0)
    if kernel == "linear":
        return KernelSpec(kind="linear")
    raise ValueError(f"unknown kernel {kernel!r}")


class BinarySvc(BaseEstimator, ClassifierMixin):
    """Binary maximum-margin classifier with labels in {-1, +1}."""

    def __init__(self, kernel="rbf", degree=3, coef0=1.0, gamma=None,
                 C=10.0, kkt_tol=1e-3, max_passes=200, seed=0):
        self.kernel = kernel
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.C = C
        self.kkt_tol = kkt_tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y):
        X = _as_matrix(X)
        y = np.asarray(y, dtype=np.float64).ravel()
        spec = _kernel_spec(self.kernel, self.degree, self.coef0, self.gamma, X.shape[1])
        cfg = TrainConfig(C=self.C, kkt_tol=self.kkt_tol, max_passes=self.max_passes, seed=self.seed)
        self.model_ = train_binary(X, y, spec, cfg)
        return self

    def decision_function(self, X):
        return self.model_.decision_function(_as_matrix(X))

    def predict(self, X):
        return np.where(self.decision_function(X) > 0, 1.0, -1.0)


class ExpressionClassifier(BaseEstimator, ClassifierMixin):
    """One-vs-one expression classifier over the six basic expressions."""

    def __init__(self, kernel="rbf", degree=3, coef0=1.0, gamma=None,
                 C=10.0, kkt_tol=1e-3, max_passes=200, seed=0):
        self.kernel = kernel
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.C = C
        self.kkt_tol = kkt_tol
        self.max_passes = max_passes
        self.seed = seed

    def fit(self, X, y):
        X = _as_matrix(X)
        spec = _kernel_spec(self.kernel, self.degree, self.coef0, self.gamma, X.shape[1])
        cfg = TrainConfig(C=self.C, kkt_tol=self.kkt_tol, max_passes=self.max_passes, seed=self.seed)
        self.model_ = train_multiclass(X, y, spec, cfg)
        self.classes_ = np.array(self.model_.present_classes(), dtype=object)
        return self

    def predict(self, X):
        return np.array(predict_many(self.model_, _as_matrix(X)), dtype=object)

    def vote_tally(self, x) -> tuple[str, dict[str, int]]:
        return predict_expression(self.model_, np.asarray(x, dtype=np.float64).ravel())

    def evaluate(self, X, y):
        return evaluate(self.model_, _as_matrix(X), y)

    def save(self, path) -> None:
        save_model(self.model_, path)

    @classmethod
    def load(cls, path) -> "ExpressionClassifier":
        model = load_model(path)
        est = cls(kernel=model.kernel.kind, degree=model.kernel.degree,
                  coef0=model.kernel.coef0, gamma=model.kernel.gamma)
        est.model_ = model
        est.classes_ = np.array(model.present_classes(), dtype=object)
        return est
