"""Binary soft-margin SVM trained by sequential minimal optimization.

Solves the dual problem

    maximize  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
    s.t.      0 <= alpha_i <= C,  sum(alpha_i y_i) = 0

by repeatedly optimizing one pair of multipliers analytically. Pair updates
keep the equality constraint satisfied exactly and never decrease the dual
objective; the trainer records the objective after every update so callers
can verify monotone progress.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateLabels, DimensionError
from .kernels import KernelSpec, kernel_matrix

SV_THRESHOLD = 1e-9


@dataclass(frozen=True)
class TrainConfig:
    """Box constraint and stopping rules for SMO."""

    C: float = 10.0
    kkt_tol: float = 1e-3
    max_passes: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be > 0, got {self.C}")
        if self.kkt_tol <= 0:
            raise ValueError(f"kkt_tol must be > 0, got {self.kkt_tol}")


@dataclass
class BinarySvmModel:
    """Trained binary model: support vectors with signed multipliers and bias."""

    support_vectors: np.ndarray  # (n_sv, d)
    alphas: np.ndarray  # alpha_i * y_i, signed
    bias: float
    kernel: KernelSpec
    converged: bool = True
    n_passes: int = 0
    objective: float = 0.0
    objective_history: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.support_vectors.shape[1]:
            raise DimensionError(
                f"expected dimension {self.support_vectors.shape[1]}, got {X.shape[1]}"
            )
        K = kernel_matrix(self.kernel, X, self.support_vectors)
        return K @ self.alphas + self.bias


def predict_binary(model: BinarySvmModel, x: np.ndarray) -> float:
    """Signed decision value f(x); the predicted label is its sign."""
    return float(model.decision_function(np.atleast_2d(x))[0])


class _Smo:
    """Working state of one SMO run."""

    def __init__(self, X, y, kernel: KernelSpec, cfg: TrainConfig):
        self.X = X
        self.y = y
        self.C = cfg.C
        self.tol = cfg.kkt_tol
        self.K = kernel_matrix(kernel, X, X)
        n = len(y)
        self.alpha = np.zeros(n)
        self.b = 0.0
        self.u = np.zeros(n)  # decision values without bias
        self.objective = 0.0
        self.history: list[float] = []
        self.rng = np.random.default_rng(cfg.seed)

    def error(self, i: int) -> float:
        return self.u[i] + self.b - self.y[i]

    def take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        e1, e2 = self.error(i1), self.error(i2)
        s = y1 * y2
        if s < 0:
            lo, hi = max(0.0, a2 - a1), min(self.C, self.C + a2 - a1)
        else:
            lo, hi = max(0.0, a1 + a2 - self.C), min(self.C, a1 + a2)
        if lo >= hi:
            return False
        k11 = self.K[i1, i1]
        k12 = self.K[i1, i2]
        k22 = self.K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0:
            a2_new = a2 + y2 * (e1 - e2) / eta
            a2_new = min(hi, max(lo, a2_new))
        else:
            # flat or concave-up direction: the best point is an endpoint, and
            # only an actual improvement is worth taking
            lo_gain = self._step_gain(i1, i2, lo)
            hi_gain = self._step_gain(i1, i2, hi)
            if max(lo_gain, hi_gain) <= 1e-12:
                return False
            a2_new = lo if lo_gain >= hi_gain else hi
        if abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        a1_new = min(self.C, max(0.0, a1_new))  # guard fp drift only

        d1 = a1_new - a1
        d2 = a2_new - a2
        gain = (
            d1
            + d2
            - d1 * y1 * self.u[i1]
            - d2 * y2 * self.u[i2]
            - 0.5 * (d1 * d1 * k11 + d2 * d2 * k22)
            - d1 * d2 * s * k12
        )

        b1 = self.b - e1 - y1 * d1 * k11 - y2 * d2 * k12
        b2 = self.b - e2 - y1 * d1 * k12 - y2 * d2 * k22
        if 0.0 < a1_new < self.C:
            self.b = b1
        elif 0.0 < a2_new < self.C:
            self.b = b2
        else:
            self.b = (b1 + b2) / 2.0

        self.u += d1 * y1 * self.K[:, i1] + d2 * y2 * self.K[:, i2]
        self.alpha[i1] = a1_new
        self.alpha[i2] = a2_new
        self.objective += gain
        self.history.append(self.objective)
        return True

    def _step_gain(self, i1: int, i2: int, a2_new: float) -> float:
        """Objective change if alpha[i2] moved to a2_new along the constraint."""
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        s = y1 * y2
        d2 = a2_new - a2
        d1 = -s * d2
        return (
            d1
            + d2
            - d1 * y1 * self.u[i1]
            - d2 * y2 * self.u[i2]
            - 0.5 * (d1 * d1 * self.K[i1, i1] + d2 * d2 * self.K[i2, i2])
            - d1 * d2 * s * self.K[i1, i2]
        )

    def examine(self, i2: int) -> bool:
        """Try to improve the KKT-violating sample i2 with some partner."""
        e2 = self.error(i2)
        non_bound = np.nonzero((self.alpha > SV_THRESHOLD) & (self.alpha < self.C - SV_THRESHOLD))[0]
        if non_bound.size > 1:
            errors = self.u[non_bound] + self.b - self.y[non_bound]
            i1 = int(non_bound[np.argmax(np.abs(errors - e2))])
            if self.take_step(i1, i2):
                return True
        n = len(self.y)
        if non_bound.size:
            start = int(self.rng.integers(non_bound.size))
            for k in range(non_bound.size):
                if self.take_step(int(non_bound[(start + k) % non_bound.size]), i2):
                    return True
        start = int(self.rng.integers(n))
        for k in range(n):
            if self.take_step((start + k) % n, i2):
                return True
        return False

    def violates_kkt(self, i: int) -> bool:
        r = self.error(i) * self.y[i]
        return (r < -self.tol and self.alpha[i] < self.C) or (r > self.tol and self.alpha[i] > 0)


def train_binary(
    X: np.ndarray,
    y: np.ndarray,
    kernel: KernelSpec | None = None,
    cfg: TrainConfig | None = None,
) -> BinarySvmModel:
    """Train a binary model on samples X with labels y in {-1, +1}.

    Training stops when a full pass finds no KKT violation beyond
    ``cfg.kkt_tol``, or after ``cfg.max_passes`` passes (the model is then
    flagged unconverged).
    """
    kernel = kernel or KernelSpec()
    cfg = cfg or TrainConfig()
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if len(X) != len(y):
        raise DimensionError(f"{len(X)} samples but {len(y)} labels")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise DegenerateLabels("need at least one sample of each label")
    if not np.all(np.abs(y) == 1.0):
        raise ValueError("binary labels must be +1 or -1")

    state = _Smo(X, y, kernel, cfg)
    n = len(y)
    converged = False
    passes = 0
    while passes < cfg.max_passes:
        order = state.rng.permutation(n)
        violations = 0
        for i2 in order:
            if state.violates_kkt(int(i2)):
                violations += 1
                state.examine(int(i2))
        passes += 1
        if violations == 0:
            converged = True
            break

    sv = state.alpha > SV_THRESHOLD
    if not sv.any():
        # no violation ever found: degenerate but feasible; keep one sample so
        # the decision function is well defined
        sv[0] = True
    bias = _final_bias(state, sv)
    return BinarySvmModel(
        support_vectors=X[sv].copy(),
        alphas=(state.alpha * y)[sv].copy(),
        bias=bias,
        kernel=kernel,
        converged=converged,
        n_passes=passes,
        objective=state.objective,
        objective_history=np.array(state.history),
    )


def _final_bias(state: _Smo, sv: np.ndarray) -> float:
    """Bias from margin support vectors, with a KKT-interval fallback."""
    v = state.y - state.u  # the b satisfying y_i (u_i + b) = 1 per sample
    margin = (state.alpha > SV_THRESHOLD) & (state.alpha < state.C - SV_THRESHOLD)
    if margin.any():
        return float(v[margin].mean())
    # all multipliers at bounds: b is only constrained to an interval
    pos, neg = state.y > 0, state.y < 0
    at_zero = state.alpha <= SV_THRESHOLD
    at_c = state.alpha >= state.C - SV_THRESHOLD
    lower = v[(pos & at_zero) | (neg & at_c)]
    upper = v[(pos & at_c) | (neg & at_zero)]
    if lower.size and upper.size:
        return float((lower.max() + upper.min()) / 2.0)
    if sv.any():
        return float(v[sv].mean())
    return 0.0
