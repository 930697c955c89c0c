"""Autoregressive distributed lag models for multi-quarter cumulative growth.

The dependent variable is the h-quarter cumulative log growth dated t; the
regressors are a constant, lags of year-on-year growth starting at t-h, and
lags of one predictor starting at t-h. Forecasting from origin T plugs in
the latest observed regressors, so the fitted equation directly predicts
growth over (T, T+h].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DegenerateFit, SampleTooShort
from .estimation import LsFit, bic, ols_fit
from .quarters import Quarter
from .series import Series

MAX_LAG = 5
HORIZONS = (4, 12, 20, 28)


@dataclass(frozen=True)
class ArdlSpec:
    horizon: int
    p: int
    q: int = 0
    predictor: str | None = None

    def __post_init__(self) -> None:
        if self.horizon not in HORIZONS:
            raise ValueError(f"horizon must be one of {HORIZONS}, got {self.horizon}")
        if not 1 <= self.p <= MAX_LAG:
            raise ValueError(f"p must be in 1..{MAX_LAG}, got {self.p}")
        if self.predictor is None:
            if self.q != 0:
                raise ValueError("q must be 0 for the autoregressive benchmark")
        elif not 1 <= self.q <= MAX_LAG:
            raise ValueError(f"q must be in 1..{MAX_LAG}, got {self.q}")


@dataclass(frozen=True)
class FittedArdl:
    spec: ArdlSpec
    coefficients: np.ndarray     # constant, p own-lag terms, q predictor terms
    sample: tuple[Quarter, Quarter]   # data window the fit was allowed to use
    targets: tuple[Quarter, Quarter]  # first and last dependent observation
    n: int
    rss: float
    r_squared: float
    bic: float

    @property
    def intercept(self) -> float:
        return float(self.coefficients[0])

    @property
    def ar_coefficients(self) -> np.ndarray:
        return self.coefficients[1 : 1 + self.spec.p]

    @property
    def dl_coefficients(self) -> np.ndarray:
        return self.coefficients[1 + self.spec.p :]


def _target_bounds(y_h: Series, y: Series, x: Series | None, h: int,
                   p_depth: int, q_depth: int,
                   sample: tuple[Quarter, Quarter]) -> tuple[Quarter, Quarter]:
    """Feasible dependent-variable range: every regressor lag must land on a
    present value inside the sample window.
    """
    start, end = sample
    y_first, y_last = y.first_valid(), y.last_valid()
    t_first, t_last = y_h.first_valid(), y_h.last_valid()
    if y_first is None or t_first is None:
        raise SampleTooShort("growth series has no observations")
    lo = max(t_first, max(start, y_first) + h - 1 + p_depth)
    hi = min(end, t_last, y_last + h)
    if x is not None:
        x_first, x_last = x.first_valid(), x.last_valid()
        if x_first is None:
            raise SampleTooShort("predictor has no observations")
        lo = max(lo, max(start, x_first) + h - 1 + q_depth)
        hi = min(hi, x_last + h)
    return lo, hi


def _lag_block(s: Series, t_lo: Quarter, t_hi: Quarter, h: int, depth: int) -> np.ndarray:
    """Columns s(t-h), s(t-h-1), ..., s(t-h+1-depth) for targets t_lo..t_hi."""
    cols = [s.window(t_lo - h + 1 - j, t_hi - h + 1 - j) for j in range(1, depth + 1)]
    return np.column_stack(cols)


def ardl_design(y_h: Series, y: Series, x: Series | None, h: int, p: int, q: int,
                sample: tuple[Quarter, Quarter]):
    """Dependent vector and regressor matrix on the feasible target range.

    Returns (targets_lo, targets_hi, X, yvec) where X = [1 | own lags | predictor lags].
    """
    t_lo, t_hi = _target_bounds(y_h, y, x, h, p, q, sample)
    n = t_hi - t_lo + 1
    if n <= 0:
        raise SampleTooShort(f"no feasible observations for h={h}, p={p}, q={q} in {sample[0]}..{sample[1]}")
    yvec = y_h.window(t_lo, t_hi)
    blocks = [np.ones((n, 1)), _lag_block(y, t_lo, t_hi, h, p)]
    if x is not None and q > 0:
        blocks.append(_lag_block(x, t_lo, t_hi, h, q))
    X = np.hstack(blocks)
    if np.isnan(X).any() or np.isnan(yvec).any():
        raise DataError("missing values inside the estimation sample")
    return t_lo, t_hi, X, yvec


def fit_ardl(spec: ArdlSpec, y_h: Series, y: Series, x: Series | None,
             sample: tuple[Quarter, Quarter]) -> FittedArdl:
    if (spec.predictor is None) != (x is None):
        raise ValueError("predictor series must be supplied exactly when the spec names one")
    t_lo, t_hi, X, yvec = ardl_design(y_h, y, x, spec.horizon, spec.p, spec.q, sample)
    n, k = X.shape
    if n < spec.p + spec.q + 2:
        raise SampleTooShort(f"{n} observations for p={spec.p}, q={spec.q}; need {spec.p + spec.q + 2}")
    fit: LsFit = ols_fit(X, yvec)
    try:
        crit = bic(fit.rss, n, k)
    except DegenerateFit:
        crit = -math.inf
    return FittedArdl(spec, fit.coefficients, sample, (t_lo, t_hi), n, fit.rss, fit.r_squared, crit)


def _candidate_bic(X: np.ndarray, yvec: np.ndarray, cols: list[int]) -> float:
    fit = ols_fit(X[:, cols], yvec)
    try:
        return bic(fit.rss, X.shape[0], len(cols))
    except DegenerateFit:
        return -math.inf  # perfect fit; smallest candidate wins via strict comparison


def select_lags_ardl(y_h: Series, y: Series, x: Series | None, horizon: int,
                     pmax: int = MAX_LAG, qmax: int = MAX_LAG,
                     sample: tuple[Quarter, Quarter] | None = None) -> tuple[int, int]:
    """Sequential BIC lag choice: own lags first, then predictor lags given
    the chosen p. Every candidate is scored on the identical observation set,
    the one feasible at (pmax, qmax), so the criteria are comparable.
    Returns (p, 0) when no predictor is supplied.
    """
    if sample is None:
        raise ValueError("sample window is required")
    if not 1 <= pmax <= MAX_LAG or not 1 <= qmax <= MAX_LAG:
        raise ValueError(f"lag bounds must be in 1..{MAX_LAG}")
    h = horizon
    q_depth = qmax if x is not None else 0
    t_lo, t_hi, X, yvec = ardl_design(y_h, y, x, h, pmax, q_depth, sample)
    n = X.shape[0]
    if n < pmax + q_depth + 2:
        raise SampleTooShort(f"{n} common observations; need {pmax + q_depth + 2} to compare lags")
    best_p, best = 1, math.inf
    for p in range(1, pmax + 1):
        crit = _candidate_bic(X, yvec, list(range(p + 1)))
        if crit < best:
            best_p, best = p, crit
    if x is None:
        return best_p, 0
    best_q, best = 1, math.inf
    for q in range(1, qmax + 1):
        cols = list(range(best_p + 1)) + [1 + pmax + j for j in range(q)]
        crit = _candidate_bic(X, yvec, cols)
        if crit < best:
            best_q, best = q, crit
    return best_p, best_q


def forecast_direct(model: FittedArdl, y: Series, x: Series | None, origin: Quarter) -> float:
    """Plug the latest observed regressors into the fitted equation: the
    prediction of cumulative growth over (origin, origin + h].
    """
    spec = model.spec
    value = model.intercept
    for j in range(1, spec.p + 1):
        q = origin + 1 - j
        if not y.has(q):
            raise DataError(f"growth value missing at {q} for forecasting")
        value += model.ar_coefficients[j - 1] * y.at(q)
    if spec.predictor is not None:
        if x is None:
            raise ValueError("predictor series required")
        for j in range(1, spec.q + 1):
            q = origin + 1 - j
            if not x.has(q):
                raise DataError(f"predictor value missing at {q} for forecasting")
            value += model.dl_coefficients[j - 1] * x.at(q)
    return float(value)
