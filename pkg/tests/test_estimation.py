import numpy as np
import pytest
from numpy.testing import assert_allclose

from cyclecast.errors import DegenerateFit, RankDeficient, SampleTooShort
from oracles import normal_equations_exact

from cyclecast.estimation import (
    DesignMatrix,
    bic,
    dummy_obs_bayes_fit,
    lasso_fit,
    lasso_kkt_violation,
    ols_fit,
    pca,
)


class TestOls:
    def test_exact_line(self):
        X = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
        y = np.array([0.0, 1.0, 2.0])
        fit = ols_fit(X, y)
        assert_allclose(fit.coefficients, [0.0, 1.0], atol=1e-14)
        assert fit.rss < 1e-24
        assert_allclose(fit.r_squared, 1.0)

    def test_orthogonal_regressor_gets_zero_slope(self):
        x = np.array([-1.0, 0.0, 1.0, 0.0])
        y = np.array([1.0, -1.0, 1.0, -1.0])  # orthogonal to x and demeaned
        X = np.column_stack([np.ones(4), x])
        fit = ols_fit(X, y)
        assert_allclose(fit.coefficients[1], 0.0, atol=1e-14)

    def test_matches_rational_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n = int(rng.integers(4, 31))
            k = int(rng.integers(1, min(n, 5) + 1))
            X = np.round(rng.normal(size=(n, k)), 6)
            X[:, 0] = 1.0
            y = np.round(rng.normal(size=n), 6)
            fit = ols_fit(X, y)
            oracle = normal_equations_exact(X, y)
            assert_allclose(fit.coefficients, oracle, atol=1e-10)

    def test_residuals_orthogonal_to_columns(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(40, 4))
        y = rng.normal(size=40)
        fit = ols_fit(X, y)
        assert np.max(np.abs(X.T @ fit.residuals)) <= 1e-8 * np.linalg.norm(y)

    def test_r2_invariant_to_column_rescaling(self):
        rng = np.random.default_rng(6)
        X = np.column_stack([np.ones(30), rng.normal(size=(30, 2))])
        y = rng.normal(size=30)
        base = ols_fit(X, y).r_squared
        X2 = X.copy()
        X2[:, 1] = 3.5 * X2[:, 1] - 1.2  # affine rescale, constant present
        assert_allclose(ols_fit(X2, y).r_squared, base, rtol=1e-12)

    def test_rank_deficient_raises(self):
        X = np.column_stack([np.ones(10), np.arange(10.0), 2 * np.arange(10.0)])
        with pytest.raises(RankDeficient):
            ols_fit(X, np.arange(10.0))

    def test_too_few_rows_raises(self):
        with pytest.raises(SampleTooShort):
            ols_fit(np.ones((2, 3)), np.ones(2))

    def test_design_matrix_wrapper(self):
        X = DesignMatrix(np.column_stack([np.ones(5), np.arange(5.0)]), ("const", "t"))
        fit = ols_fit(X, 2.0 * np.arange(5.0) + 1.0)
        assert_allclose(fit.coefficients, [1.0, 2.0], atol=1e-12)
        with pytest.raises(ValueError):
            DesignMatrix(np.array([[np.nan, 1.0]]), ("a", "b"))
        with pytest.raises(ValueError):
            DesignMatrix(np.ones((2, 2)), ("a", "a"))


class TestBic:
    def test_formula_value(self):
        assert_allclose(bic(100.0, 100, 2), 2 * np.log(100.0), rtol=1e-12)

    def test_extra_parameter_costs_log_n(self):
        n = 250
        assert_allclose(bic(3.0, n, 4) - bic(3.0, n, 3), np.log(n), rtol=1e-12)

    def test_degenerate_rss_raises(self):
        with pytest.raises(DegenerateFit):
            bic(0.0, 10, 1)

    def test_ranking_matches_gaussian_log_marginal(self):
        # Oracle: Schwarz approximation to the log marginal likelihood of a
        # Gaussian regression, computed from first principles.
        rng = np.random.default_rng(9)
        n_total = 220
        y = np.zeros(n_total)
        for t in range(2, n_total):
            y[t] = 1.1 * y[t - 1] - 0.4 * y[t - 2] + rng.normal()
        pmax = 5
        targets = y[pmax:]
        n = targets.size
        bics, logmls = [], []
        for p in range(1, pmax + 1):
            X = np.column_stack([np.ones(n)] + [y[pmax - j : n_total - j] for j in range(1, p + 1)])
            fit = ols_fit(X, targets)
            k = p + 1
            bics.append(bic(fit.rss, n, k))
            max_ll = -0.5 * n * (np.log(2 * np.pi * fit.rss / n) + 1.0)
            logmls.append(max_ll - 0.5 * k * np.log(n))
        assert list(np.argsort(bics)) == list(np.argsort(-np.array(logmls)))


class TestLasso:
    def test_lambda_zero_equals_ols(self):
        rng = np.random.default_rng(21)
        X = rng.normal(size=(60, 3))
        y = X @ np.array([1.0, -2.0, 0.5]) + rng.normal(size=60)
        full = ols_fit(np.column_stack([np.ones(60), X]), y)
        assert_allclose(lasso_fit(X, y, 0.0), full.coefficients, atol=1e-6)

    def test_soft_threshold_closed_form(self):
        # standardized single regressor with OLS slope exactly 1.0
        rng = np.random.default_rng(22)
        x = rng.normal(size=200)
        x = (x - x.mean()) / np.sqrt(np.mean((x - x.mean()) ** 2))
        e = rng.normal(size=200)
        e -= (e @ x) / (x @ x) * x  # orthogonalize so the slope is exact
        y = 1.0 * x + 0.1 * e
        coef = lasso_fit(x[:, None], y, 0.3)
        assert_allclose(coef[1], 0.7, atol=1e-8)

    def test_threshold_lambda_zeroes_everything(self):
        rng = np.random.default_rng(23)
        X = rng.normal(size=(80, 4))
        X = (X - X.mean(0)) / np.sqrt(np.mean((X - X.mean(0)) ** 2, axis=0))
        y = rng.normal(size=80)
        lam_max = np.max(np.abs(X.T @ (y - y.mean()))) / 80
        coef = lasso_fit(X, y, lam_max * 1.0000001)
        assert_allclose(coef[1:], 0.0, atol=1e-12)
        assert_allclose(coef[0], y.mean(), rtol=1e-12)

    def test_kkt_conditions_random_instances(self):
        rng = np.random.default_rng(24)
        for _ in range(10):
            n, p = 50, 6
            X = rng.normal(size=(n, p))
            y = X[:, 0] * 0.8 + rng.normal(size=n)
            lam = float(rng.uniform(0.02, 0.4))
            coef = lasso_fit(X, y, lam)
            assert lasso_kkt_violation(X, y, coef, lam) <= 1e-6

    def test_path_monotone_single_regressor(self):
        rng = np.random.default_rng(25)
        x = rng.normal(size=100)
        y = 2.0 * x + rng.normal(size=100)
        slopes = [abs(lasso_fit(x[:, None], y, lam)[1]) for lam in np.linspace(0.0, 2.5, 12)]
        for a, b in zip(slopes, slopes[1:]):
            assert b <= a + 1e-10

    def test_constant_column_rejected(self):
        X = np.column_stack([np.ones(10), np.arange(10.0)])
        with pytest.raises(RankDeficient):
            lasso_fit(X, np.arange(10.0), 0.1)


class TestPca:
    def test_duplicate_columns_one_component(self):
        rng = np.random.default_rng(31)
        x = rng.normal(size=50)
        X = np.column_stack([x, x])
        _, _, ev = pca(X, 2)
        assert_allclose(ev[0], 2.0, rtol=1e-12)
        assert_allclose(ev[1], 0.0, atol=1e-12)

    def test_diagonal_line_loading(self):
        t = np.linspace(-1, 1, 50)
        X = np.column_stack([t, t * 2.0])  # perfectly correlated -> y=x after standardizing
        _, loadings, _ = pca(X, 1)
        assert_allclose(np.abs(loadings[:, 0]), 1 / np.sqrt(2), rtol=1e-12)
        assert loadings[np.argmax(np.abs(loadings[:, 0])), 0] > 0

    def test_matches_eigensolver_oracle(self):
        rng = np.random.default_rng(32)
        X = rng.normal(size=(40, 5)) @ rng.normal(size=(5, 5))
        Z = (X - X.mean(0)) / np.sqrt(np.mean((X - X.mean(0)) ** 2, axis=0))
        corr = Z.T @ Z / Z.shape[0]
        evals, evecs = np.linalg.eigh(corr)
        order = np.argsort(evals)[::-1]
        evals, evecs = evals[order], evecs[:, order]
        _, loadings, ev = pca(X, 5)
        assert_allclose(ev, evals, atol=1e-8)
        for j in range(5):
            v, w = loadings[:, j], evecs[:, j]
            assert min(np.max(np.abs(v - w)), np.max(np.abs(v + w))) <= 1e-8

    def test_explained_variance_properties(self):
        rng = np.random.default_rng(33)
        X = rng.normal(size=(60, 6))
        _, _, ev = pca(X, 6)
        assert np.all(ev >= -1e-12)
        assert np.all(np.diff(ev) <= 1e-12)
        assert_allclose(ev.sum(), 6.0, rtol=1e-10)

    def test_zero_variance_column_rejected(self):
        X = np.column_stack([np.ones(10), np.arange(10.0)])
        with pytest.raises(ValueError):
            pca(X, 1)

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            pca(np.random.default_rng(0).normal(size=(10, 3)), 4)


class TestDummyObsBayes:
    def test_no_dummies_is_ols(self):
        rng = np.random.default_rng(41)
        X = np.column_stack([np.ones(30), rng.normal(size=(30, 2))])
        Y = rng.normal(size=(30, 2))
        B = dummy_obs_bayes_fit(Y, X, np.empty((0, 2)), np.empty((0, 3)))
        for j in range(2):
            assert_allclose(B[:, j], ols_fit(X, Y[:, j]).coefficients, atol=1e-12)

    def test_huge_dummy_scale_forces_zero(self):
        rng = np.random.default_rng(42)
        X = rng.normal(size=(30, 3))
        y = X @ np.array([1.0, 2.0, 3.0]) + rng.normal(size=30)
        scale = 1e8
        B = dummy_obs_bayes_fit(y, X, np.zeros((3, 1)), scale * np.eye(3))
        assert_allclose(B[:, 0], 0.0, atol=1e-10)

    def test_matches_ridge_closed_form(self):
        rng = np.random.default_rng(43)
        X = rng.normal(size=(25, 4))
        Y = rng.normal(size=(25, 2))
        Xd = rng.normal(size=(6, 4))
        Yd = rng.normal(size=(6, 2))
        B = dummy_obs_bayes_fit(Y, X, Yd, Xd)
        oracle = np.linalg.solve(X.T @ X + Xd.T @ Xd, X.T @ Y + Xd.T @ Yd)
        assert_allclose(B, oracle, atol=1e-8)

    def test_row_count_mismatch(self):
        with pytest.raises(ValueError):
            dummy_obs_bayes_fit(np.ones((5, 1)), np.ones((5, 1)), np.ones((2, 1)), np.ones((3, 1)))

    def test_vanishing_dummies_recover_ols(self):
        rng = np.random.default_rng(44)
        X = np.column_stack([np.ones(40), rng.normal(size=(40, 3))])
        y = rng.normal(size=40)
        lam = 1e6
        Xd = rng.normal(size=(5, 4)) / lam
        Yd = rng.normal(size=(5, 1)) / lam
        B = dummy_obs_bayes_fit(y, X, Yd, Xd)[:, 0]
        ols = ols_fit(X, y).coefficients
        assert np.linalg.norm(B - ols) / np.linalg.norm(ols) < 1e-4
