"""Vector autoregressions for iterated multi-step forecasting.

A VAR on year-on-year growth rates is iterated forward, feeding forecasts
back as lags, and the growth path is then chained into a log-level forecast
through the four-quarter recursion ln L(t) = g(t) + ln L(t-4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DataError, DegenerateFit, SampleTooShort
from .estimation import qr_solve
from .quarters import Quarter
from .series import Series

MAX_LAG = 5


@dataclass(frozen=True)
class VarSpec:
    variables: tuple[str, ...]
    p: int
    estimator: str = "ols"        # ols | lbvar | lasso
    lam: float | None = None
    tau: float | None = None

    def __post_init__(self) -> None:
        if len(self.variables) < 1:
            raise ValueError("a VAR needs at least one variable")
        if self.p < 1:
            raise ValueError(f"lag count must be >= 1, got {self.p}")
        if self.estimator not in ("ols", "lbvar", "lasso"):
            raise ValueError(f"unknown estimator tag {self.estimator!r}")
        if self.estimator == "lbvar" and (self.lam is None or self.tau is None):
            raise ValueError("lbvar needs both shrinkage parameters")
        if self.estimator == "lasso" and self.lam is None:
            raise ValueError("lasso needs a penalty parameter")


@dataclass(frozen=True)
class FittedVar:
    spec: VarSpec
    intercept: np.ndarray        # (m,)
    lag_matrices: np.ndarray     # (p, m, m); lag_matrices[j-1][i, k] multiplies var k at lag j in eq i
    sample: tuple[Quarter, Quarter]
    targets: tuple[Quarter, Quarter]
    n: int
    sigma: np.ndarray            # residual covariance, rss/n convention
    bic: float

    @property
    def m(self) -> int:
        return len(self.spec.variables)


def var_design(series: list[Series], p: int,
               sample: tuple[Quarter, Quarter]) -> tuple[Quarter, Quarter, np.ndarray, np.ndarray]:
    """Stacked system rows: Y holds current values, X = [1 | lag1 .. lagp]
    with each lag block ordered like the variable list.
    """
    start, end = sample
    firsts = [s.first_valid() for s in series]
    lasts = [s.last_valid() for s in series]
    if any(f is None for f in firsts):
        raise SampleTooShort("a variable has no observations")
    t_lo = max(max(start, f) for f in firsts) + p
    t_hi = min([end] + lasts)
    n = t_hi - t_lo + 1
    if n <= 0:
        raise SampleTooShort(f"no feasible observations for p={p} in {start}..{end}")
    Y = np.column_stack([s.window(t_lo, t_hi) for s in series])
    blocks = [np.ones((n, 1))]
    for j in range(1, p + 1):
        blocks.append(np.column_stack([s.window(t_lo - j, t_hi - j) for s in series]))
    X = np.hstack(blocks)
    if np.isnan(X).any() or np.isnan(Y).any():
        raise DataError("missing values inside the estimation sample")
    return t_lo, t_hi, X, Y


def system_bic(sigma: np.ndarray, n: int, k_total: int) -> float:
    """n*ln det(residual covariance) + k_total*ln n; singular covariance is an error."""
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise DegenerateFit("singular residual covariance")
    return n * logdet + k_total * np.log(n)


def _coefficients_to_blocks(coef: np.ndarray, m: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    a0 = coef[0, :].copy()
    B = np.empty((p, m, m))
    for j in range(p):
        # rows of coef are regressors; equation i reads column i
        B[j] = coef[1 + j * m : 1 + (j + 1) * m, :].T
    return a0, B


def fit_var(spec: VarSpec, data: Mapping[str, Series],
            sample: tuple[Quarter, Quarter]) -> FittedVar:
    """Equation-by-equation least squares (solved jointly via one QR)."""
    if spec.estimator != "ols":
        raise ValueError("fit_var handles the ols tag; shrinkage estimators live in highdim")
    series = [data[v] for v in spec.variables]
    m, p = len(series), spec.p
    t_lo, t_hi, X, Y = var_design(series, p, sample)
    n, k = X.shape
    if n < k + 1:
        raise SampleTooShort(f"{n} observations for {k} coefficients per equation")
    coef = qr_solve(X, Y)
    resid = Y - X @ coef
    sigma = resid.T @ resid / n
    a0, B = _coefficients_to_blocks(coef, m, p)
    try:
        crit = system_bic(sigma, n, m * k)
    except DegenerateFit:
        crit = -math.inf
    return FittedVar(spec, a0, B, sample, (t_lo, t_hi), n, sigma, crit)


def select_var_lags(variables: tuple[str, ...], data: Mapping[str, Series],
                    pmax: int = MAX_LAG,
                    sample: tuple[Quarter, Quarter] | None = None) -> int:
    """Whole-system BIC over p = 1..pmax, every candidate scored on the
    observation set feasible at pmax.
    """
    if sample is None:
        raise ValueError("sample window is required")
    series = [data[v] for v in variables]
    m = len(series)
    _, _, X, Y = var_design(series, pmax, sample)
    n = X.shape[0]
    if n < 1 + m * pmax + 1:
        raise SampleTooShort(f"{n} common observations cannot support {pmax} lags of {m} variables")
    best_p, best = 1, math.inf
    for p in range(1, pmax + 1):
        cols = list(range(1 + m * p))
        coef = qr_solve(X[:, cols], Y)
        resid = Y - X[:, cols] @ coef
        sigma = resid.T @ resid / n
        try:
            crit = system_bic(sigma, n, m * len(cols))
        except DegenerateFit:
            crit = -math.inf
        if crit < best:
            best_p, best = p, crit
    return best_p


def iterate_var_forecast(model: FittedVar, data: Mapping[str, Series],
                         origin: Quarter, steps: int) -> np.ndarray:
    """Standard VAR recursion from the last p observed vectors at the origin;
    row s-1 holds the s-step-ahead forecast of every variable.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    series = [data[v] for v in model.spec.variables]
    p, m = model.spec.p, model.m
    history: list[np.ndarray] = []
    for back in range(p - 1, -1, -1):
        q = origin - back
        vec = np.array([s.get(q) for s in series])
        if np.isnan(vec).any():
            missing = model.spec.variables[int(np.flatnonzero(np.isnan(vec))[0])]
            raise DataError(f"{missing} missing at {q}; cannot start the recursion")
        history.append(vec)
    out = np.empty((steps, m))
    for s in range(steps):
        value = model.intercept.copy()
        for j in range(1, p + 1):
            value += model.lag_matrices[j - 1] @ history[-j]
        out[s] = value
        history.append(value)
    return out


def unconditional_mean(model: FittedVar) -> np.ndarray:
    """(I - sum B_j)^-1 a0; the limit of the recursion for a stable system."""
    return np.linalg.solve(np.eye(model.m) - model.lag_matrices.sum(axis=0), model.intercept)


def cumulate_log_levels(yoy_forecasts: np.ndarray, trailing_log_levels: np.ndarray) -> np.ndarray:
    """Chain year-on-year growth forecasts into log levels.

    trailing_log_levels holds the last four observed log levels, oldest
    first (origin-3 .. origin). Element s-1 of the result is the log level
    at origin+s, built from observed levels while s <= 4 and from already
    reconstructed ones afterwards.
    """
    yoy = np.asarray(yoy_forecasts, dtype=float)
    tail = np.asarray(trailing_log_levels, dtype=float)
    if tail.shape != (4,):
        raise DataError(f"need exactly 4 trailing observed log levels, got {tail.shape}")
    if yoy.ndim != 1 or yoy.size < 1:
        raise ValueError("need at least one growth forecast")
    chain = list(tail)
    for s in range(yoy.size):
        chain.append(yoy[s] + chain[s])
    return np.array(chain[4:])


def cumulate_to_level(yoy_forecasts: np.ndarray, trailing_log_levels: np.ndarray) -> float:
    """Log-level forecast at origin + h, where h = len(yoy_forecasts)."""
    return float(cumulate_log_levels(yoy_forecasts, trailing_log_levels)[-1])
