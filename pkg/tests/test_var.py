import numpy as np
import pytest
from numpy.testing import assert_allclose
from oracles import level_chain_by_hand, var_recursion_by_hand

from cyclecast.errors import DataError, SampleTooShort
from cyclecast.estimation import ols_fit
from cyclecast.quarters import Quarter
from cyclecast.series import Series, apply_transform, cumulative_log_growth
from cyclecast.var import (
    FittedVar,
    VarSpec,
    cumulate_log_levels,
    cumulate_to_level,
    fit_var,
    iterate_var_forecast,
    select_var_lags,
    unconditional_mean,
    var_design,
)

Q = Quarter
START = Q(1960, 1)


def simulate_var(rng, a0, B_list, n, sigma=1.0):
    m = len(a0)
    p = len(B_list)
    y = np.zeros((n, m))
    for t in range(p, n):
        val = np.array(a0, dtype=float)
        for j, B in enumerate(B_list, start=1):
            val += np.asarray(B) @ y[t - j]
        if sigma > 0:
            val += rng.normal(scale=sigma, size=m)
        y[t] = val
    return {f"v{i}": Series(START, y[:, i]) for i in range(m)}


def manual_fitted_var(variables, a0, B_list, p=None):
    a0 = np.asarray(a0, dtype=float)
    B = np.asarray(B_list, dtype=float)
    spec = VarSpec(tuple(variables), B.shape[0], "ols")
    return FittedVar(spec, a0, B, (START, START + 9), (START, START + 9),
                     10, np.eye(len(a0)), 0.0)


class TestFit:
    def test_zero_noise_recovery(self):
        # a damped rotation keeps the noise-free orbit away from collinearity
        theta = 0.7
        B1 = 0.97 * np.array([[np.cos(theta), -np.sin(theta)],
                              [np.sin(theta), np.cos(theta)]])
        a0 = np.array([0.5, -0.25])
        y = np.zeros((40, 2))
        y[0] = [3.0, -2.0]
        for t in range(1, 40):
            y[t] = a0 + B1 @ y[t - 1]
        data = {f"v{i}": Series(START, y[:, i]) for i in range(2)}
        fit = fit_var(VarSpec(("v0", "v1"), 1), data, (START, START + 39))
        assert_allclose(fit.intercept, a0, atol=1e-8)
        assert_allclose(fit.lag_matrices[0], B1, atol=1e-8)

    def test_equation_by_equation_equals_stacked(self):
        rng = np.random.default_rng(3)
        data = simulate_var(rng, [0.1, 0.2, 0.0], [np.eye(3) * 0.4], 150)
        fit = fit_var(VarSpec(("v0", "v1", "v2"), 2), data, (START, START + 149))
        series = [data[f"v{i}"] for i in range(3)]
        _, _, X, Y = var_design(series, 2, (START, START + 149))
        for i in range(3):
            ols = ols_fit(X, Y[:, i]).coefficients
            assert_allclose(fit.intercept[i], ols[0], atol=1e-12)
            assert_allclose(fit.lag_matrices[0][i, :], ols[1:4], atol=1e-12)
            assert_allclose(fit.lag_matrices[1][i, :], ols[4:7], atol=1e-12)

    def test_sample_too_short(self):
        rng = np.random.default_rng(4)
        data = simulate_var(rng, [0.0, 0.0], [np.eye(2) * 0.5], 10)
        with pytest.raises(SampleTooShort):
            fit_var(VarSpec(("v0", "v1"), 4), data, (START, START + 9))


class TestLagSelection:
    def test_white_noise_selects_one_lag(self):
        rng = np.random.default_rng(5)
        hits = 0
        sims = 40
        for _ in range(sims):
            data = {
                "a": Series(START, rng.normal(size=400)),
                "b": Series(START, rng.normal(size=400)),
            }
            p = select_var_lags(("a", "b"), data, sample=(START, START + 399))
            hits += p == 1
        assert hits >= 0.9 * sims

    def test_recovers_true_order(self):
        rng = np.random.default_rng(6)
        B = [np.array([[0.5, 0.2], [0.0, 0.4]]), np.array([[-0.35, 0.0], [0.1, -0.3]])]
        hits = 0
        sims = 30
        for _ in range(sims):
            data = simulate_var(rng, [0.0, 0.0], B, 400)
            p = select_var_lags(("v0", "v1"), data, sample=(START, START + 399))
            hits += p == 2
        assert hits >= 0.9 * sims


class TestIteration:
    def test_zero_coefficients_return_constant(self):
        m = manual_fitted_var(("a", "b"), [1.5, -0.5], [np.zeros((2, 2))])
        data = {
            "a": Series(START, np.ones(10)),
            "b": Series(START, np.ones(10)),
        }
        out = iterate_var_forecast(m, data, START + 9, 5)
        assert_allclose(out, np.tile([1.5, -0.5], (5, 1)))

    def test_scalar_ar1_closed_form(self):
        phi = 0.83
        m = manual_fitted_var(("a",), [0.0], [[[phi]]])
        y_T = 2.7
        data = {"a": Series(START, np.concatenate([np.zeros(9), [y_T]]))}
        out = iterate_var_forecast(m, data, START + 9, 12)
        expected = np.array([phi**s * y_T for s in range(1, 13)])
        assert_allclose(out[:, 0], expected, rtol=0, atol=1e-12)

    def test_matches_hand_unrolled_recursion(self):
        rng = np.random.default_rng(7)
        a0 = rng.normal(size=3)
        B = [rng.normal(scale=0.2, size=(3, 3)) for _ in range(2)]
        m = manual_fitted_var(("a", "b", "c"), a0, B)
        vals = rng.normal(size=(10, 3))
        data = {k: Series(START, vals[:, i]) for i, k in enumerate(("a", "b", "c"))}
        out = iterate_var_forecast(m, data, START + 9, 3)
        oracle = var_recursion_by_hand(a0, B, [vals[8], vals[9]], 3)
        assert_allclose(out, oracle, atol=1e-12)

    def test_converges_to_unconditional_mean(self):
        rng = np.random.default_rng(8)
        B = [np.array([[0.5, 0.1], [0.05, 0.6]])]
        a0 = np.array([0.2, -0.1])
        m = manual_fitted_var(("v0", "v1"), a0, B)
        data = simulate_var(rng, a0, B, 10)
        out = iterate_var_forecast(m, data, START + 9, 400)
        assert_allclose(out[-1], unconditional_mean(m), atol=1e-6)

    def test_missing_history_raises(self):
        m = manual_fitted_var(("a",), [0.0], [[[0.5]]])
        data = {"a": Series(START, [1.0, np.nan])}
        with pytest.raises(DataError):
            iterate_var_forecast(m, data, START + 1, 2)

    def test_steps_validation(self):
        m = manual_fitted_var(("a",), [0.0], [[[0.5]]])
        data = {"a": Series(START, [1.0])}
        with pytest.raises(ValueError):
            iterate_var_forecast(m, data, START, 0)


class TestCumulateToLevel:
    def test_zero_growth_returns_base_level(self):
        tail = np.array([4.0, 4.1, 4.2, 4.3])
        assert cumulate_to_level(np.zeros(4), tail) == 4.3
        assert cumulate_to_level(np.zeros(8), tail) == 4.3
        path = cumulate_log_levels(np.zeros(6), tail)
        assert_allclose(path, [4.0, 4.1, 4.2, 4.3, 4.0, 4.1])

    def test_constant_growth_telescopes(self):
        g = 0.0125
        tail = np.array([1.0, 1.1, 1.2, 1.3])
        assert_allclose(cumulate_to_level(np.full(8, g), tail), 1.3 + 2 * g, rtol=1e-15)

    def test_matches_step_by_step_oracle_h12(self):
        rng = np.random.default_rng(9)
        yoy = rng.normal(0.02, 0.01, size=12)
        tail = np.array([9.0, 9.01, 9.015, 9.02])
        oracle = level_chain_by_hand(yoy, {-3: 9.0, -2: 9.01, -1: 9.015, 0: 9.02})
        assert_allclose(cumulate_log_levels(yoy, tail), oracle, rtol=0, atol=0)
        assert cumulate_to_level(yoy, tail) == oracle[-1]

    def test_realized_growth_reproduces_levels_exactly(self):
        rng = np.random.default_rng(10)
        levels = np.exp(np.cumsum(rng.normal(0.006, 0.009, 80)) + 9.0)
        s = Series(START, levels)
        log_level = apply_transform(s, "log")
        yoy = cumulative_log_growth(s, 4)
        origin = START + 40
        h = 12
        realized_yoy = np.array([yoy.at(origin + j) for j in range(1, h + 1)])
        tail = np.array([log_level.at(origin - 3 + j) for j in range(4)])
        path = cumulate_log_levels(realized_yoy, tail)
        expected = np.array([log_level.at(origin + j) for j in range(1, h + 1)])
        assert np.array_equal(path, expected)

    def test_requires_four_trailing_levels(self):
        with pytest.raises(DataError):
            cumulate_to_level(np.zeros(4), np.array([1.0, 2.0, 3.0]))
