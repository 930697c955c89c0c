"""High-dimensional VAR estimators: Bayesian shrinkage via dummy
observations, per-equation L1 penalties, and principal-component factors.

All three consume the full predictor panel, keep the growth target as the
first variable, and produce FittedVar objects that iterate exactly like the
small models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import DegenerateFit, SampleTooShort
from .estimation import dummy_obs_bayes_fit, lasso_fit, ols_fit, pca
from .quarters import Quarter
from .series import Series
from .var import (
    FittedVar,
    VarSpec,
    _coefficients_to_blocks,
    fit_var,
    system_bic,
    var_design,
)


def _ar_residual_scales(X: np.ndarray, Y: np.ndarray, m: int, p: int) -> np.ndarray:
    """Residual standard deviation of a univariate AR(p) per variable, fit on
    the same rows as the system; anchors the cross-variable prior scaling.
    """
    scales = np.empty(m)
    n = Y.shape[0]
    if n < p + 2:
        raise SampleTooShort(f"{n} observations cannot support AR({p}) scale estimation")
    for i in range(m):
        cols = [0] + [1 + j * m + i for j in range(p)]
        fit = ols_fit(X[:, cols], Y[:, i])
        scales[i] = math.sqrt(fit.rss / (n - p - 1))
    if np.any(scales <= 0.0):
        raise DegenerateFit("zero residual scale in a univariate autoregression")
    return scales


def minnesota_dummies(scales: np.ndarray, means: np.ndarray, p: int,
                      lam: float, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Synthetic observations encoding the shrinkage prior.

    Own- and cross-lag coefficients are pulled toward zero with tightness
    growing in the lag (rows j*sigma_i/lam), long-run sums of own lags are
    pulled toward one (rows mean_i/tau), and residual-scale rows pin the
    error variances. The intercept column stays untouched, leaving it diffuse.
    """
    m = scales.size
    k = 1 + m * p
    X_tight = np.zeros((m * p, k))
    Y_tight = np.zeros((m * p, m))
    r = 0
    for j in range(1, p + 1):
        for i in range(m):
            X_tight[r, 1 + (j - 1) * m + i] = j * scales[i] / lam
            r += 1
    X_sum = np.zeros((m, k))
    Y_sum = np.zeros((m, m))
    for i in range(m):
        Y_sum[i, i] = means[i] / tau
        for j in range(p):
            X_sum[i, 1 + j * m + i] = means[i] / tau
    X_scale = np.zeros((m, k))
    Y_scale = np.diag(scales)
    X_d = np.vstack([X_tight, X_sum, X_scale])
    Y_d = np.vstack([Y_tight, Y_sum, Y_scale])
    return Y_d, X_d


def fit_lbvar(data: Dataset, p: int = 5, lam: float = 0.05, tau: float | None = None,
              sample: tuple[Quarter, Quarter] | None = None) -> FittedVar:
    """Shrinkage VAR on every dataset entry, first label treated as the
    target. Prior means are zero for all lag coefficients because every
    variable enters in stationary form.
    """
    if lam <= 0.0:
        raise ValueError(f"lambda must be positive, got {lam}")
    tau = 100.0 * lam if tau is None else tau
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    if sample is None:
        raise ValueError("sample window is required")
    labels = tuple(data.labels)
    series = [data.series(v) for v in labels]
    m = len(series)
    t_lo, t_hi, X, Y = var_design(series, p, sample)
    n = X.shape[0]
    scales = _ar_residual_scales(X, Y, m, p)
    means = Y.mean(axis=0)
    Y_d, X_d = minnesota_dummies(scales, means, p, lam, tau)
    coef = dummy_obs_bayes_fit(Y, X, Y_d, X_d)
    resid = Y - X @ coef
    sigma = resid.T @ resid / n
    a0, B = _coefficients_to_blocks(coef, m, p)
    try:
        crit = system_bic(sigma, n, m * X.shape[1])
    except DegenerateFit:
        crit = -math.inf
    spec = VarSpec(labels, p, "lbvar", lam=lam, tau=tau)
    return FittedVar(spec, a0, B, sample, (t_lo, t_hi), n, sigma, crit)


def fit_lasso_var(data: Dataset, p: int = 5, lam: float = 0.0,
                  sample: tuple[Quarter, Quarter] | None = None) -> FittedVar:
    """Each equation estimated independently by penalized coordinate descent
    on the stacked lag design; the intercept is never penalized.
    """
    if sample is None:
        raise ValueError("sample window is required")
    labels = tuple(data.labels)
    series = [data.series(v) for v in labels]
    m = len(series)
    t_lo, t_hi, X, Y = var_design(series, p, sample)
    n = X.shape[0]
    lags = X[:, 1:]  # penalized block; lasso_fit adds its own intercept
    coef = np.empty((1 + m * p, m))
    for i in range(m):
        coef[:, i] = lasso_fit(lags, Y[:, i], lam)
    resid = Y - X @ coef
    sigma = resid.T @ resid / n
    a0, B = _coefficients_to_blocks(coef, m, p)
    k_active = m + int(np.count_nonzero(coef[1:, :]))
    try:
        crit = system_bic(sigma, n, k_active)
    except DegenerateFit:
        crit = -math.inf
    spec = VarSpec(labels, p, "lasso", lam=lam)
    return FittedVar(spec, a0, B, sample, (t_lo, t_hi), n, sigma, crit)


@dataclass(frozen=True)
class FactorVarFit:
    var: FittedVar
    factors: dict[str, Series]
    loadings: np.ndarray
    explained_variance: np.ndarray

    def iteration_data(self, gdp_growth: Series, gdp_label: str = "y") -> dict[str, Series]:
        out: dict[str, Series] = {gdp_label: gdp_growth}
        out.update(self.factors)
        return out


def fit_factor_var(gdp_growth: Series, data: Dataset, k: int, p: int = 5,
                   sample: tuple[Quarter, Quarter] | None = None) -> FactorVarFit:
    """Extract k principal components from the predictor panel (growth target
    excluded), then fit an OLS VAR on [target, factors] with the target first.
    """
    if sample is None:
        raise ValueError("sample window is required")
    if k < 1:
        raise ValueError(f"factor count must be >= 1, got {k}")
    start, end = sample
    firsts = [data.series(v).first_valid() for v in data.labels]
    lasts = [data.series(v).last_valid() for v in data.labels]
    if any(f is None for f in firsts):
        raise SampleTooShort("a predictor has no observations")
    r_lo = max(max(start, f) for f in firsts)
    r_hi = min([end] + lasts)
    if r_hi - r_lo + 1 < 2:
        raise SampleTooShort("predictor panel too short for factor extraction")
    panel = np.column_stack([data.series(v).window(r_lo, r_hi) for v in data.labels])
    if np.isnan(panel).any():
        raise SampleTooShort("predictor panel is not balanced on the estimation sample")
    scores, loadings, explained = pca(panel, k)
    factors = {f"pc{i + 1}": Series(r_lo, scores[:, i]) for i in range(k)}
    series_map: dict[str, Series] = {"y": gdp_growth}
    series_map.update(factors)
    spec = VarSpec(tuple(series_map), p, "ols")
    var = fit_var(spec, series_map, sample)
    return FactorVarFit(var, factors, loadings, explained)
