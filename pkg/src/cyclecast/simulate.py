"""Seeded synthetic data generators for tests and fixtures.

The main generator produces a quarterly GDP level whose log growth is driven
by exactly one predictor through a bivariate VAR(1); all other predictors
are independent noise. With the frozen parameters below the predictor adds
about 0.30 of population R-squared to the one-step growth equation
(computable from the implied Lyapunov variance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, DatasetEntry
from .quarters import Quarter
from .series import Series, TransformCode

GROWTH_PERSISTENCE = 0.1
SIGNAL_COEFFICIENT = 0.003
SIGNAL_PERSISTENCE = 0.8
GROWTH_SHOCK_SD = 0.005
MEAN_GROWTH = 0.006
NOISE_PERSISTENCE = 0.5
BURN_IN = 200


@dataclass(frozen=True)
class SimulatedPanel:
    gdp_level: Series
    predictors: Dataset
    true_predictor: str


def simulate_panel(seed: int, n_predictors: int = 20, n_quarters: int = 232,
                   start: Quarter = Quarter(1960, 1)) -> SimulatedPanel:
    """Panel where predictor x01 leads GDP growth and the rest are noise."""
    if n_predictors < 1:
        raise ValueError("need at least one predictor")
    rng = np.random.default_rng(seed)
    total = n_quarters + BURN_IN
    x = np.zeros(total)
    g = np.zeros(total)
    for t in range(1, total):
        x[t] = SIGNAL_PERSISTENCE * x[t - 1] + rng.normal()
        g[t] = (MEAN_GROWTH
                + GROWTH_PERSISTENCE * g[t - 1]
                + SIGNAL_COEFFICIENT * x[t - 1]
                + rng.normal(scale=GROWTH_SHOCK_SD))
    g = g[BURN_IN:]
    x = x[BURN_IN:]
    log_level = 9.0 + np.cumsum(g)
    gdp_level = Series(start, np.exp(log_level))

    entries = {"x01": DatasetEntry(Series(start, x), TransformCode.LEVEL, group="signal")}
    for i in range(2, n_predictors + 1):
        noise = np.zeros(total)
        for t in range(1, total):
            noise[t] = NOISE_PERSISTENCE * noise[t - 1] + rng.normal()
        entries[f"x{i:02d}"] = DatasetEntry(Series(start, noise[BURN_IN:]),
                                            TransformCode.LEVEL, group="noise")
    return SimulatedPanel(gdp_level, Dataset(entries), "x01")


def simulate_ar_series(seed: int, phi, n: int, start: Quarter = Quarter(1960, 1),
                       intercept: float = 0.0, sigma: float = 1.0) -> Series:
    """Univariate autoregression, mostly for estimator unit tests."""
    rng = np.random.default_rng(seed)
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    p = phi.size
    total = n + BURN_IN
    y = np.zeros(total)
    for t in range(p, total):
        y[t] = intercept + phi @ y[t - p : t][::-1] + rng.normal(scale=sigma)
    return Series(start, y[BURN_IN:])
