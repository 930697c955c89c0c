"""Adapters that wire series and panels into the backtest harness.

Each forecaster owns its data, re-selects and refits on every estimation
window, and reports either cumulative-growth forecasts (direct) or log-level
forecasts (iterated). The harness only sees the small protocol:
`forecast(window, horizons)` plus `target_value(quarter, horizon)`.
"""

from __future__ import annotations

import math

import numpy as np

from .ardl import ArdlSpec, FittedArdl, forecast_direct
from .dataset import Dataset, DatasetEntry
from .errors import DataError, RankDeficient, SampleTooShort
from .estimation import ols_fit
from .highdim import fit_factor_var, fit_lasso_var, fit_lbvar
from .quarters import Quarter
from .series import Series, TransformCode, apply_transform, cumulative_log_growth
from .var import VarSpec, cumulate_log_levels, fit_var, iterate_var_forecast, select_var_lags

Window = tuple[Quarter, Quarter]


class _HorizonDesign:
    """Lag design for one horizon, built once over the whole data span.

    Rows are indexed by the dependent quarter; early rows may hold NaN in
    deep-lag columns, so window slices always start at the first row where
    every requested column is populated. Candidate lag counts are scored
    from a single QR per stage: with columns ordered shallow-to-deep, the
    residual sum of squares of each prefix model is the total sum of squares
    minus the accumulated squared projections.
    """

    def __init__(self, y_h: Series, y: Series, x: Series | None,
                 h: int, pmax: int, qmax: int) -> None:
        self.h, self.pmax = h, pmax
        self.qmax = qmax if x is not None else 0
        self.has_x = x is not None
        self.y_first = y.first_valid()
        self.x_first = x.first_valid() if x is not None else None
        if self.y_first is None or y_h.first_valid() is None:
            raise SampleTooShort("growth series has no observations")
        t_base = max(y_h.first_valid(), self.y_first + h)
        t_max = min(y_h.last_valid(), y.last_valid() + h)
        if x is not None:
            if self.x_first is None:
                raise SampleTooShort("predictor has no observations")
            t_base = max(t_base, self.x_first + h)
            t_max = min(t_max, x.last_valid() + h)
        if t_max - t_base < 0:
            raise SampleTooShort(f"no overlap between target and regressors at h={h}")
        self.t_base, self.t_max = t_base, t_max
        self.yvec = y_h.window(t_base, t_max)
        cols = [np.ones(t_max - t_base + 1)]
        cols += [y.window(t_base - h + 1 - j, t_max - h + 1 - j) for j in range(1, pmax + 1)]
        if x is not None:
            cols += [x.window(t_base - h + 1 - j, t_max - h + 1 - j) for j in range(1, qmax + 1)]
        self.X = np.column_stack(cols)

    def _t_lo(self, start: Quarter, p: int, q: int) -> Quarter:
        lo = max(self.t_base, max(start, self.y_first) + self.h - 1 + p)
        if self.has_x and q > 0:
            lo = max(lo, max(start, self.x_first) + self.h - 1 + q)
        return lo

    def _rows(self, window: Window, p: int, q: int):
        t_lo = self._t_lo(window[0], p, q)
        t_hi = min(window[1], self.t_max)
        n = t_hi - t_lo + 1
        if n <= 0:
            raise SampleTooShort(f"window {window[0]}..{window[1]} leaves no observations")
        return slice(t_lo - self.t_base, t_hi - self.t_base + 1), t_lo, t_hi, n

    @staticmethod
    def _prefix_rss(X: np.ndarray, yv: np.ndarray) -> np.ndarray:
        """rss of the regression on the first j columns, for every j >= 1."""
        Q, R = np.linalg.qr(X)
        diag = np.abs(np.diag(R))
        if diag.min() <= diag.max() * max(X.shape) * np.finfo(float).eps:
            raise RankDeficient(f"design matrix of shape {X.shape} is rank deficient")
        z = Q.T @ yv
        return float(yv @ yv) - np.cumsum(z * z)

    @staticmethod
    def _best_by_bic(rss_by_count: list[tuple[int, float, int]], n: int) -> int:
        """rss entries are (candidate, rss, k); ties go to the first entry."""
        best, best_crit = rss_by_count[0][0], math.inf
        for cand, rss, k in rss_by_count:
            crit = -math.inf if rss <= 0.0 else n * math.log(rss / n) + k * math.log(n)
            if crit < best_crit:
                best, best_crit = cand, crit
        return best

    def select(self, window: Window) -> tuple[int, int]:
        """Own lags by BIC first, then predictor lags given that choice; all
        candidates scored on the sample feasible at (pmax, qmax).
        """
        rows, _, _, n = self._rows(window, self.pmax, self.qmax)
        if n < self.pmax + self.qmax + 2:
            raise SampleTooShort(f"{n} common observations; need {self.pmax + self.qmax + 2}")
        yv = self.yvec[rows]
        rss_ar = self._prefix_rss(self.X[rows, : 1 + self.pmax], yv)
        p = self._best_by_bic(
            [(j, rss_ar[j], j + 1) for j in range(1, self.pmax + 1)], n)
        if not self.has_x:
            return p, 0
        cols = list(range(p + 1)) + [1 + self.pmax + j for j in range(self.qmax)]
        rss_full = self._prefix_rss(self.X[rows][:, cols], yv)
        q = self._best_by_bic(
            [(j, rss_full[p + j], p + 1 + j) for j in range(1, self.qmax + 1)], n)
        return p, q

    def fit(self, window: Window, spec: ArdlSpec) -> FittedArdl:
        """Refit the selected shape on its own maximal feasible sample."""
        rows, t_lo, t_hi, n = self._rows(window, spec.p, spec.q)
        if n < spec.p + spec.q + 2:
            raise SampleTooShort(f"{n} observations for p={spec.p}, q={spec.q}")
        cols = list(range(spec.p + 1)) + [1 + self.pmax + j for j in range(spec.q)]
        fit = ols_fit(self.X[rows][:, cols], self.yvec[rows])
        k = len(cols)
        crit = -math.inf if fit.rss <= 0.0 else n * math.log(fit.rss / n) + k * math.log(n)
        return FittedArdl(spec, fit.coefficients, window, (t_lo, t_hi), n,
                          fit.rss, fit.r_squared, crit)


class DirectArdlForecaster:
    """Multi-step regressions whose dependent variable is the h-quarter
    cumulative growth itself; with no predictor this is the autoregressive
    benchmark. Lags are re-selected by BIC on every window.
    """

    kind = "direct"

    def __init__(self, model_id: str, gdp_level: Series, horizons,
                 predictor: str | None = None, x: Series | None = None,
                 pmax: int = 5, qmax: int = 5) -> None:
        if (predictor is None) != (x is None):
            raise ValueError("predictor label and series must be supplied together")
        self.model_id = model_id
        self.predictor = predictor
        self.x = x
        self.y = apply_transform(gdp_level, TransformCode.YOY_LOG_DIFF)
        self.targets = {h: cumulative_log_growth(gdp_level, h) for h in horizons}
        self.designs = {h: _HorizonDesign(self.targets[h], self.y, x, h, pmax, qmax)
                        for h in horizons}

    def target_value(self, quarter: Quarter, horizon: int) -> float:
        series = self.targets[horizon]
        if not series.has(quarter):
            raise DataError(f"no realized {horizon}-quarter growth at {quarter}")
        return series.at(quarter)

    def forecast(self, window: Window, horizons) -> tuple[dict[int, float], None]:
        origin = window[1]
        out: dict[int, float] = {}
        for h in horizons:
            design = self.designs[h]
            p, q = design.select(window)
            fit = design.fit(window, ArdlSpec(h, p, q, self.predictor))
            out[h] = forecast_direct(fit, self.y, self.x, origin)
        return out, None


class _IteratedBase:
    """Shared growth-to-level plumbing for everything that iterates a VAR."""

    kind = "iterated"

    def __init__(self, gdp_level: Series) -> None:
        self.y = apply_transform(gdp_level, TransformCode.YOY_LOG_DIFF)
        self.log_level = apply_transform(gdp_level, TransformCode.LOG)

    def target_value(self, quarter: Quarter, horizon: int) -> float:
        if not self.log_level.has(quarter):
            raise DataError(f"no realized log level at {quarter}")
        return self.log_level.at(quarter)

    def _levels_from_growth_path(self, growth_path: np.ndarray, origin: Quarter) -> np.ndarray:
        tail = np.array([self.log_level.get(origin - 3 + i) for i in range(4)])
        if np.isnan(tail).any():
            raise DataError(f"need four observed log levels through {origin}")
        return cumulate_log_levels(growth_path, tail)


class IteratedVarForecaster(_IteratedBase):
    """Small system on growth plus at most one predictor, iterated forward;
    univariate when no predictor is given (the iterated benchmark).
    """

    def __init__(self, model_id: str, gdp_level: Series,
                 predictor: str | None = None, x: Series | None = None,
                 pmax: int = 5) -> None:
        super().__init__(gdp_level)
        if (predictor is None) != (x is None):
            raise ValueError("predictor label and series must be supplied together")
        self.model_id = model_id
        self.predictor = predictor
        self.pmax = pmax
        self.series: dict[str, Series] = {"y": self.y}
        if x is not None:
            self.series[predictor] = x
        self.variables = tuple(self.series)

    def forecast(self, window: Window, horizons) -> tuple[dict[int, float], float]:
        origin = window[1]
        p = select_var_lags(self.variables, self.series, self.pmax, window)
        fit = fit_var(VarSpec(self.variables, p), self.series, window)
        path = iterate_var_forecast(fit, self.series, origin, max(horizons))
        levels = self._levels_from_growth_path(path[:, 0], origin)
        return {h: float(levels[h - 1]) for h in horizons}, fit.bic


def _panel_with_target(gdp_growth: Series, predictors: Dataset, target_label: str) -> Dataset:
    if target_label in predictors:
        raise ValueError(f"{target_label!r} must not appear among the predictors")
    panel = Dataset({target_label: DatasetEntry(gdp_growth, TransformCode.YOY_LOG_DIFF)})
    for label in predictors.labels:
        panel = panel.with_entry(label, predictors[label])
    return panel


class LbvarForecaster(_IteratedBase):
    """Shrinkage VAR over the whole panel, growth target first, fixed lag depth."""

    def __init__(self, model_id: str, gdp_level: Series, predictors: Dataset,
                 lam: float, tau: float | None = None, p: int = 5,
                 target_label: str = "y") -> None:
        super().__init__(gdp_level)
        self.model_id = model_id
        self.predictor = None
        self.lam = lam
        self.tau = tau
        self.p = p
        self.panel = _panel_with_target(self.y, predictors, target_label)

    def forecast(self, window: Window, horizons) -> tuple[dict[int, float], float]:
        origin = window[1]
        fit = fit_lbvar(self.panel, self.p, self.lam, self.tau, window)
        path = iterate_var_forecast(fit, self.panel.series_map(), origin, max(horizons))
        levels = self._levels_from_growth_path(path[:, 0], origin)
        return {h: float(levels[h - 1]) for h in horizons}, fit.bic


class LassoVarForecaster(_IteratedBase):
    """Per-equation L1-penalized VAR over the whole panel."""

    def __init__(self, model_id: str, gdp_level: Series, predictors: Dataset,
                 lam: float, p: int = 5, target_label: str = "y") -> None:
        super().__init__(gdp_level)
        self.model_id = model_id
        self.predictor = None
        self.lam = lam
        self.p = p
        self.panel = _panel_with_target(self.y, predictors, target_label)

    def forecast(self, window: Window, horizons) -> tuple[dict[int, float], float]:
        origin = window[1]
        fit = fit_lasso_var(self.panel, self.p, self.lam, window)
        path = iterate_var_forecast(fit, self.panel.series_map(), origin, max(horizons))
        levels = self._levels_from_growth_path(path[:, 0], origin)
        return {h: float(levels[h - 1]) for h in horizons}, fit.bic


class FactorVarForecaster(_IteratedBase):
    """Growth target plus k principal components of the predictor panel,
    factors re-extracted on every window.
    """

    def __init__(self, model_id: str, gdp_level: Series, predictors: Dataset,
                 k: int, p: int = 5) -> None:
        super().__init__(gdp_level)
        self.model_id = model_id
        self.predictor = None
        self.k = k
        self.p = p
        self.predictors = predictors

    def forecast(self, window: Window, horizons) -> tuple[dict[int, float], float]:
        origin = window[1]
        fit = fit_factor_var(self.y, self.predictors, self.k, self.p, window)
        data = fit.iteration_data(self.y)
        path = iterate_var_forecast(fit.var, data, origin, max(horizons))
        levels = self._levels_from_growth_path(path[:, 0], origin)
        return {h: float(levels[h - 1]) for h in horizons}, fit.var.bic


AR_DIRECT = "ar_direct"
AR_ITERATED = "ar_iterated"


def direct_model_set(gdp_level: Series, predictors: Dataset, horizons,
                     pmax: int = 5, qmax: int = 5) -> list[DirectArdlForecaster]:
    """Benchmark plus one distributed-lag model per predictor."""
    models = [DirectArdlForecaster(AR_DIRECT, gdp_level, horizons, pmax=pmax)]
    for label in predictors.labels:
        models.append(DirectArdlForecaster(
            f"ardl:{label}", gdp_level, horizons,
            predictor=label, x=predictors.series(label), pmax=pmax, qmax=qmax))
    return models


def iterated_model_set(gdp_level: Series, predictors: Dataset,
                       pmax: int = 5) -> list[IteratedVarForecaster]:
    """Univariate benchmark plus one bivariate system per predictor."""
    models = [IteratedVarForecaster(AR_ITERATED, gdp_level, pmax=pmax)]
    for label in predictors.labels:
        models.append(IteratedVarForecaster(
            f"var:{label}", gdp_level,
            predictor=label, x=predictors.series(label), pmax=pmax))
    return models
