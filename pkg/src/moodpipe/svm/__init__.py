"""Maximum-margin classification: SMO-trained binary SVMs, kernels,
one-vs-one multiclass voting and model persistence."""

from .estimators import BinarySvc, ExpressionClassifier
from .kernels import KernelSpec, kernel_eval, kernel_matrix, linear, polynomial, rbf
from .multiclass import (
    CLASS_PAIRS,
    EXPRESSIONS,
    EvalReport,
    MultiClassSvmModel,
    evaluate,
    pairwise_scores,
    predict_expression,
    predict_many,
    train_multiclass,
)
from .persistence import load_model, save_model
from .scaling import Scaler, standardize_apply, standardize_fit
from .smo import BinarySvmModel, TrainConfig, predict_binary, train_binary

__all__ = [
    "BinarySvc",
    "BinarySvmModel",
    "CLASS_PAIRS",
    "EXPRESSIONS",
    "EvalReport",
    "ExpressionClassifier",
    "KernelSpec",
    "MultiClassSvmModel",
    "Scaler",
    "TrainConfig",
    "evaluate",
    "kernel_eval",
    "kernel_matrix",
    "linear",
    "load_model",
    "pairwise_scores",
    "polynomial",
    "predict_binary",
    "predict_expression",
    "predict_many",
    "rbf",
    "save_model",
    "standardize_apply",
    "standardize_fit",
    "train_binary",
    "train_multiclass",
]
