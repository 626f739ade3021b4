import numpy as np
import pytest

from _instances import rbf_problem
from l1pofr.errors import SingularLooError
from l1pofr.ofr import L1PofrConfig, run_l1pofr
from l1pofr.oracle import (
    dense_loomse, exhaustive_small_ofr, grid_lambda, literal_loo, press_errors,
)


def loo_by_deletion(X, y):
    """Textbook leave-one-out residuals by refitting without each row."""
    out = np.empty(len(y))
    for k in range(len(y)):
        keep = np.arange(len(y)) != k
        coef = np.linalg.lstsq(X[keep], y[keep], rcond=None)[0]
        out[k] = y[k] - X[k] @ coef
    return out


class TestLiteralLoo:
    def test_constant_fit(self):
        w = np.ones(3)
        rep = literal_loo(w, w, [0.0])
        assert rep.literal_loomse == 0.0 and rep.all_signs_agree

    @pytest.mark.parametrize("seed", range(5))
    def test_unpenalized_is_deletion_refit(self, seed):
        rng = np.random.default_rng(seed)
        W = np.linalg.qr(rng.normal(size=(15, 3)))[0] * rng.uniform(0.5, 2, size=3)
        y = rng.normal(size=15)
        rep = literal_loo(W, y, np.zeros(3))
        np.testing.assert_allclose(rep.literal_errors, loo_by_deletion(W, y), rtol=1e-10)
        np.testing.assert_allclose(rep.analytic_errors, press_errors(W, y), rtol=1e-10)

    def test_press_matches_deletion(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(12, 4))
        y = rng.normal(size=12)
        np.testing.assert_allclose(press_errors(X, y), loo_by_deletion(X, y), rtol=1e-10)

    def test_singular_deletion(self):
        W = np.zeros((4, 1))
        W[0, 0] = 1.0  # removing sample 0 leaves nothing to fit
        with pytest.raises(SingularLooError) as err:
            literal_loo(W, np.arange(4.0), [0.0])
        assert err.value.k == 0

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            literal_loo(np.ones((4, 2)), np.ones(4), [0.0])


class TestGridLambda:
    def _stage(self, seed):
        dm, y = rbf_problem(seed, 30, 10)
        col = dm.values[:, 0]
        return col, y, np.ones(len(y)), col @ col

    @pytest.mark.parametrize("seed", range(5))
    def test_grid_is_no_better_than_its_own_minimum(self, seed):
        col, y, zeta, kappa = self._stage(seed)
        lam = grid_lambda(col, y, zeta, kappa, 1e-4)
        grid = np.linspace(1e-4, 2 * abs(col @ y), 2001)
        J = [dense_loomse(col, y, zeta, kappa, g) for g in grid]
        assert dense_loomse(col, y, zeta, kappa, lam) == min(J)

    def test_three_points_on_monotone_objective(self):
        # a perfect fit: every penalty only hurts, so the left endpoint wins
        c = np.array([1.0, 2.0, 3.0, 1.0])
        assert grid_lambda(c, 2 * c, np.ones(4), c @ c, 1e-3, grid_points=3) == 1e-3

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            grid_lambda(np.ones(3), np.ones(3), np.ones(3), 3.0, 1e-4, grid_points=2)


class TestExhaustive:
    def test_planted(self):
        dm, _ = rbf_problem(4, 30, 8)
        y = -2.0 * dm.values[:, 3]
        assert exhaustive_small_ofr(dm.values, y, L1PofrConfig(1e-8))[0] == 3

    def test_tie_prefers_lower_index(self):
        rng = np.random.default_rng(0)
        c = rng.uniform(0.2, 1, size=10)
        phi = np.column_stack([rng.normal(size=10), c, c])
        y = c + 0.01 * rng.normal(size=10)
        assert exhaustive_small_ofr(phi, y, L1PofrConfig(1e-4))[0] == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_engine(self, seed):
        dm, y = rbf_problem(seed, 50, 8, noise=0.2)
        cfg = L1PofrConfig(1e-4)
        model = run_l1pofr(dm, y, cfg)
        assert exhaustive_small_ofr(dm.values, y, cfg) == model.center_indices.tolist()

    def test_size_limit(self):
        with pytest.raises(ValueError):
            exhaustive_small_ofr(np.ones((10, 9)), np.ones(10), L1PofrConfig())
