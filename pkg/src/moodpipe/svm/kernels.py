"""Kernel functions for the maximum-margin classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError

KINDS = ("linear", "polynomial", "rbf")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel kind plus its parameters (unused ones are ignored)."""

    kind: str = "rbf"
    degree: int = 3
    coef0: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.kind == "polynomial" and self.degree < 1:
            raise ValueError(f"polynomial degree must be >= 1, got {self.degree}")
        if self.kind == "rbf" and self.gamma <= 0:
            raise ValueError(f"rbf gamma must be > 0, got {self.gamma}")


def linear() -> KernelSpec:
    return KernelSpec(kind="linear")


def polynomial(degree: int = 3, coef0: float = 1.0) -> KernelSpec:
    return KernelSpec(kind="polynomial", degree=degree, coef0=coef0)


def rbf(gamma: float) -> KernelSpec:
    return KernelSpec(kind="rbf", gamma=gamma)


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    """K(a, b) for two vectors of equal dimension."""
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise DimensionError(f"kernel arguments differ in dimension: {a.shape} vs {b.shape}")
    if spec.kind == "linear":
        return float(a @ b)
    if spec.kind == "polynomial":
        return float((a @ b + spec.coef0) ** spec.degree)
    diff = a - b
    return float(np.exp(-spec.gamma * (diff @ diff)))


def kernel_matrix(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gram matrix K[i, j] = K(A[i], B[j])."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"kernel arguments differ in dimension: {A.shape[1]} vs {B.shape[1]}")
    dots = A @ B.T
    if spec.kind == "linear":
        return dots
    if spec.kind == "polynomial":
        return (dots + spec.coef0) ** spec.degree
    sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * dots
    return np.exp(-spec.gamma * np.maximum(sq, 0.0))
