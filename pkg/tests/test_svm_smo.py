import numpy as np
import pytest

from moodpipe.errors import DegenerateLabels, DimensionError
from moodpipe.svm import (
    TrainConfig,
    kernel_matrix,
    linear,
    predict_binary,
    rbf,
    train_binary,
)


def dual_objective(alpha, y, K):
    """(Test oracle) the dual objective evaluated directly from its definition."""
    s = alpha * y
    return alpha.sum() - 0.5 * s @ K @ s


def grid_qp_oracle(y, K, C, final_step):
    """(Test oracle) coarse-to-fine grid maximization of the 4-point dual.

    Three multipliers sweep a grid; the fourth comes from the equality
    constraint. The dual is concave so recentering the grid on the incumbent
    and halving the step converges to the global maximum.
    """
    centers = np.full(3, C / 2.0)
    step = C / 4.0
    best = -np.inf
    while True:
        offsets = np.arange(-4, 5) * step
        g1, g2, g3 = np.meshgrid(
            *[np.clip(centers[i] + offsets, 0.0, C) for i in range(3)], indexing="ij"
        )
        a4 = -(g1 * y[0] + g2 * y[1] + g3 * y[2]) * y[3]
        ok = (a4 >= 0.0) & (a4 <= C)
        if ok.any():
            A = np.stack([g1[ok], g2[ok], g3[ok], a4[ok]], axis=1)
            S = A * y
            vals = A.sum(axis=1) - 0.5 * np.einsum("ij,jk,ik->i", S, K, S)
            k = int(np.argmax(vals))
            best = max(best, float(vals[k]))
            centers = A[k][:3]
        if step <= final_step:
            return best
        step /= 2.0


class TestAnalyticTwoPointProblem:
    X = np.array([[-1.0, 0.0], [1.0, 0.0]])
    y = np.array([-1.0, 1.0])

    def _model(self):
        return train_binary(self.X, self.y, linear(), TrainConfig(C=10.0, seed=0))

    def test_alphas_and_bias(self):
        m = self._model()
        assert np.allclose(np.abs(m.alphas), 0.5, atol=1e-9)
        assert abs(m.bias) <= 1e-6

    def test_decision_function_is_x1(self):
        m = self._model()
        assert predict_binary(m, [5.0, 0.0]) == pytest.approx(5.0, abs=1e-6)
        assert predict_binary(m, [0.0, 0.0]) == pytest.approx(0.0, abs=1e-9)
        assert predict_binary(m, [0.0, 3.0]) == pytest.approx(0.0, abs=1e-9)

    def test_margin_points_at_unit_functional_margin(self):
        m = self._model()
        for x, label in zip(self.X, self.y):
            assert label * predict_binary(m, x) == pytest.approx(1.0, abs=1e-3)


class TestXor:
    def test_rbf_separates_xor(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        y = np.array([-1.0, -1.0, 1.0, 1.0])
        m = train_binary(X, y, rbf(1.0), TrainConfig(C=10.0, seed=0))
        assert m.converged
        preds = np.sign([predict_binary(m, x) for x in X])
        assert np.array_equal(preds, y)


def _random_problem(rng, n=4, dim=2):
    X = rng.uniform(-2.0, 2.0, size=(n, dim))
    y = np.array([1.0] * (n // 2) + [-1.0] * (n // 2))
    return X, y


class TestOracleEquivalence:
    def test_dual_matches_grid_oracle_on_random_4_point_problems(self):
        rng = np.random.default_rng(7)
        C = 1.0
        for _ in range(25):
            X, y = _random_problem(rng)
            K = kernel_matrix(linear(), X, X)
            m = train_binary(X, y, linear(), TrainConfig(C=C, kkt_tol=1e-6, max_passes=2000, seed=0))
            coarse = grid_qp_oracle(y, K, C, 1e-3)
            assert abs(m.objective - coarse) <= 1e-3
            refined = grid_qp_oracle(y, K, C, 1e-5)
            assert abs(m.objective - refined) <= 1e-6

    def test_stored_objective_matches_direct_evaluation(self):
        rng = np.random.default_rng(8)
        X, y = _random_problem(rng, n=8)
        K = kernel_matrix(rbf(0.5), X, X)
        m = train_binary(X, y, rbf(0.5), TrainConfig(C=5.0, seed=1))
        alpha = np.zeros(len(y))
        # reconstruct full alpha from support vectors
        sv_rows = {tuple(row): a for row, a in zip(m.support_vectors, m.alphas)}
        for i, row in enumerate(X):
            signed = sv_rows.get(tuple(row), 0.0)
            alpha[i] = signed * y[i]
        assert dual_objective(alpha, y, K) == pytest.approx(m.objective, abs=1e-9)


class TestInvariants:
    def _random_models(self, count=10, seed=11):
        rng = np.random.default_rng(seed)
        for _ in range(count):
            n = int(rng.integers(4, 16)) // 2 * 2
            X = rng.normal(size=(n, 3))
            y = np.array([1.0, -1.0] * (n // 2))
            cfg = TrainConfig(C=float(rng.uniform(0.5, 20)), kkt_tol=1e-3, seed=int(rng.integers(100)))
            yield X, y, cfg, train_binary(X, y, rbf(0.8), cfg)

    def test_dual_feasibility(self):
        for X, y, cfg, m in self._random_models():
            raw = np.abs(m.alphas)  # |alpha_i * y_i| = alpha_i
            assert np.all(raw >= 0) and np.all(raw <= cfg.C + 1e-12)
            assert abs(m.alphas.sum()) <= 1e-9  # sum alpha_i y_i

    def test_kkt_residuals_after_convergence(self):
        for X, y, cfg, m in self._random_models(seed=12):
            if not m.converged:
                continue
            f = m.decision_function(X)
            sv_rows = {tuple(row): abs(a) for row, a in zip(m.support_vectors, m.alphas)}
            for xi, yi, fi in zip(X, y, f):
                alpha = sv_rows.get(tuple(xi), 0.0)
                margin = yi * fi
                if alpha <= 1e-9:
                    assert margin >= 1.0 - cfg.kkt_tol - 1e-9
                elif alpha >= cfg.C - 1e-9:
                    assert margin <= 1.0 + cfg.kkt_tol + 1e-9
                else:
                    assert abs(margin - 1.0) <= cfg.kkt_tol + 1e-9

    def test_objective_monotone_nondecreasing(self):
        for _, _, _, m in self._random_models(seed=13):
            assert np.all(np.diff(m.objective_history) >= -1e-9)

    def test_margin_distance_equals_inverse_weight_norm(self):
        rng = np.random.default_rng(14)
        X = np.vstack([rng.normal(loc=(-2.5, 0), scale=0.3, size=(10, 2)),
                       rng.normal(loc=(2.5, 0), scale=0.3, size=(10, 2))])
        y = np.array([-1.0] * 10 + [1.0] * 10)
        cfg = TrainConfig(C=100.0, kkt_tol=1e-6, max_passes=5000, seed=0)
        m = train_binary(X, y, linear(), cfg)
        w = m.alphas @ m.support_vectors
        w_norm = np.linalg.norm(w)
        for sv, a in zip(m.support_vectors, m.alphas):
            if 1e-9 < abs(a) < cfg.C - 1e-9:
                distance = abs(w @ sv + m.bias) / w_norm
                assert distance == pytest.approx(1.0 / w_norm, abs=1e-6)

    def test_deterministic_bit_for_bit(self):
        rng = np.random.default_rng(15)
        X = rng.normal(size=(12, 4))
        y = np.array([1.0, -1.0] * 6)
        m1 = train_binary(X, y, rbf(0.3), TrainConfig(C=3.0, seed=42))
        m2 = train_binary(X, y, rbf(0.3), TrainConfig(C=3.0, seed=42))
        assert np.array_equal(m1.alphas, m2.alphas)
        assert np.array_equal(m1.support_vectors, m2.support_vectors)
        assert m1.bias == m2.bias


class TestErrors:
    def test_single_class_rejected(self):
        X = np.ones((3, 2))
        with pytest.raises(DegenerateLabels):
            train_binary(X, np.ones(3), linear(), TrainConfig())

    def test_unconverged_flag(self):
        rng = np.random.default_rng(16)
        X = rng.normal(size=(40, 2))
        y = np.where(rng.random(40) < 0.5, 1.0, -1.0)  # noise labels
        m = train_binary(X, y, linear(), TrainConfig(C=10.0, max_passes=1, seed=0))
        assert not m.converged

    def test_dimension_mismatch_on_predict(self):
        X = np.array([[-1.0, 0.0], [1.0, 0.0]])
        m = train_binary(X, np.array([-1.0, 1.0]), linear(), TrainConfig())
        with pytest.raises(DimensionError):
            predict_binary(m, [1.0, 2.0, 3.0])
