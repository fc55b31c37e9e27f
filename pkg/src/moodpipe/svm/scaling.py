"""Per-component feature standardization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Scaler:
    mean: np.ndarray
    scale: np.ndarray  # std, floored so constant components map to zero


def standardize_fit(X: np.ndarray) -> Scaler:
    """Fit per-component mean and standard deviation (floored at 1e-9)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if len(X) < 2:
        raise ValueError(f"need at least 2 samples to fit a scaler, got {len(X)}")
    mean = X.mean(axis=0)
    scale = np.maximum(X.std(axis=0), 1e-9)
    return Scaler(mean, scale)


def standardize_apply(scaler: Scaler, X: np.ndarray) -> np.ndarray:
    """(x - mean) / scale, preserving 1-d or 2-d shape."""
    arr = np.asarray(X, dtype=np.float64)
    return (arr - scaler.mean) / scaler.scale
