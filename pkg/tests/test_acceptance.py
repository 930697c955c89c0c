"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`. The final reproduction
test needs externally supplied historical data and is skipped unless the
CYCLECAST_HISTORICAL_DATA environment variable points at a prepared
directory (see README).
"""

import csv
import hashlib
import os
import time
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose
from oracles import normal_equations_exact

from cyclecast.ardl import ArdlSpec, ardl_design, fit_ardl, forecast_direct
from cyclecast.cli import main
from cyclecast.estimation import (
    dummy_obs_bayes_fit,
    lasso_fit,
    lasso_kkt_violation,
    ols_fit,
    pca,
)
from cyclecast.evaluation import (
    ForecastRecord,
    bma_weights,
    build_report,
    combine_forecasts,
    enc_f,
    equal_combination,
    recursive_scheme,
    run_pseudo_oos,
)
from cyclecast.forecasters import AR_DIRECT, direct_model_set
from cyclecast.quarters import Quarter
from cyclecast.report import write_records
from cyclecast.series import Series, apply_transform, cumulative_log_growth
from cyclecast.simulate import simulate_panel
from cyclecast.var import FittedVar, VarSpec, cumulate_log_levels, iterate_var_forecast

Q = Quarter


def test_a1_estimator_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(20240501)

    for _ in range(50):
        n = int(rng.integers(6, 31))
        k = int(rng.integers(1, 6))
        X = np.round(rng.normal(size=(n, k)), 6)
        X[:, 0] = 1.0
        y = np.round(rng.normal(size=n), 6)
        assert_allclose(ols_fit(X, y).coefficients,
                        normal_equations_exact(X, y), atol=1e-10)

    for _ in range(10):
        n, p = 60, 4
        X = rng.normal(size=(n, p))
        y = 0.9 * X[:, 0] + rng.normal(size=n)
        lam = float(rng.uniform(0.02, 0.5))
        coef = lasso_fit(X, y, lam)
        assert lasso_kkt_violation(X, y, coef, lam) <= 1e-6

    for _ in range(10):
        n, p = 48, 4
        # exactly orthogonal, mean-zero, unit-second-moment columns
        basis, _ = np.linalg.qr(np.column_stack([np.ones(n), rng.normal(size=(n, p))]))
        X = basis[:, 1:] * np.sqrt(n)
        y = rng.normal(size=n)
        lam = float(rng.uniform(0.05, 0.5))
        coef = lasso_fit(X, y, lam)
        yc = y - y.mean()
        closed = np.array([np.sign(c) * max(abs(c) - lam, 0.0)
                           for c in X.T @ yc / n])
        assert_allclose(coef[1:], closed, atol=1e-8)

    for _ in range(10):
        n, p = 40, 5
        X = rng.normal(size=(n, p)) @ rng.normal(size=(p, p))
        Z = (X - X.mean(0)) / np.sqrt(np.mean((X - X.mean(0)) ** 2, axis=0))
        evals, evecs = np.linalg.eigh(Z.T @ Z / n)
        order = np.argsort(evals)[::-1]
        evals, evecs = evals[order], evecs[:, order]
        _, loadings, explained = pca(X, p)
        assert_allclose(explained, evals, atol=1e-8)
        for j in range(p):
            diff = min(np.max(np.abs(loadings[:, j] - evecs[:, j])),
                       np.max(np.abs(loadings[:, j] + evecs[:, j])))
            assert diff <= 1e-8

    for _ in range(10):
        n, k, d = 30, 4, 6
        X = rng.normal(size=(n, k))
        Y = rng.normal(size=(n, 2))
        Xd = rng.normal(size=(d, k))
        Yd = rng.normal(size=(d, 2))
        oracle = np.linalg.solve(X.T @ X + Xd.T @ Xd, X.T @ Y + Xd.T @ Yd)
        assert_allclose(dummy_obs_bayes_fit(Y, X, Yd, Xd), oracle, atol=1e-8)

    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    print(f"\nA1 estimator oracles: PASS ({elapsed:.2f}s)")


def test_a2_forecast_mechanics():
    # scalar AR(1) iteration equals the closed form
    phi = 0.91
    model = FittedVar(VarSpec(("g",), 1), np.array([0.0]), np.array([[[phi]]]),
                      (Q(1960, 1), Q(1962, 2)), (Q(1960, 1), Q(1962, 2)),
                      10, np.eye(1), 0.0)
    y_T = -1.37
    data = {"g": Series(Q(1960, 1), np.concatenate([np.zeros(9), [y_T]]))}
    path = iterate_var_forecast(model, data, Q(1962, 2), 24)
    assert_allclose(path[:, 0], [phi**s * y_T for s in range(1, 25)],
                    rtol=0, atol=1e-12)

    # realized growth chains back into realized levels exactly
    rng = np.random.default_rng(77)
    levels = np.exp(np.cumsum(rng.normal(0.006, 0.01, 120)) + 9.0)
    gdp = Series(Q(1960, 1), levels)
    log_level = apply_transform(gdp, "log")
    yoy = cumulative_log_growth(gdp, 4)
    origin = Q(1975, 3)
    h = 20
    realized_path = np.array([yoy.at(origin + s) for s in range(1, h + 1)])
    tail = np.array([log_level.at(origin - 3 + i) for i in range(4)])
    rebuilt = cumulate_log_levels(realized_path, tail)
    expected = np.array([log_level.at(origin + s) for s in range(1, h + 1)])
    assert np.array_equal(rebuilt, expected)

    # direct forecast equals an independent refit-and-predict oracle
    y = Series(Q(1960, 1), np.round(rng.normal(size=100), 6))
    x = Series(Q(1960, 1), np.round(rng.normal(size=100), 6))
    y_h = Series(Q(1960, 1), np.round(rng.normal(size=100), 6))
    sample = (Q(1960, 1), Q(1984, 4))
    spec = ArdlSpec(4, 2, 2, "x")
    fit = fit_ardl(spec, y_h, y, x, sample)
    _, _, X, yvec = ardl_design(y_h, y, x, 4, 2, 2, sample)
    beta = normal_equations_exact(X, yvec)
    origin = Q(1980, 1)
    row = np.concatenate([[1.0],
                          [y.at(origin + 1 - j) for j in (1, 2)],
                          [x.at(origin + 1 - j) for j in (1, 2)]])
    assert_allclose(forecast_direct(fit, y, x, origin), row @ beta, atol=1e-10)
    print("\nA2 forecast mechanics: PASS")


def test_a3_harness_topology(tmp_path):
    panel = simulate_panel(seed=42, n_predictors=5, n_quarters=232, start=Q(1960, 1))
    scheme = recursive_scheme(Q(1968, 2), Q(1985, 1), Q(2016, 4))
    horizons = (4, 12, 20)
    models = direct_model_set(panel.gdp_level, panel.predictors, horizons)

    start = time.perf_counter()
    result = run_pseudo_oos(models, scheme, horizons)
    elapsed = time.perf_counter() - start

    for model in models:
        for h in horizons:
            recs = result.select(model.model_id, h)
            assert len(recs) == 112, f"{model.model_id} h={h}: {len(recs)} targets"
            origins = [r.origin for r in recs]
            assert (min(origins), max(origins)) == (Q(1990, 1) - h, Q(2017, 4) - h)
    h20 = result.select(models[0].model_id, 20)
    assert (min(r.origin for r in h20), max(r.origin for r in h20)) == (Q(1985, 1), Q(2012, 4))
    h4 = result.select(models[0].model_id, 4)
    assert (min(r.origin for r in h4), max(r.origin for r in h4)) == (Q(1989, 1), Q(2016, 4))

    second = run_pseudo_oos(models, scheme, horizons)
    a = write_records(tmp_path / "run_a.csv", result.records)
    b = write_records(tmp_path / "run_b.csv", second.records)
    assert hashlib.sha256(a.read_bytes()).digest() == hashlib.sha256(b.read_bytes()).digest()

    assert elapsed < 1.0, f"harness took {elapsed:.2f}s on the 5-predictor fixture"
    print(f"\nA3 harness topology: PASS ({elapsed:.2f}s for {len(result.records)} records)")


def test_a4_synthetic_recovery():
    start = time.perf_counter()
    reps = 100
    horizon = 4
    eval_range = (Q(1990, 1), Q(2009, 4))
    scheme = recursive_scheme(Q(1962, 1), Q(1989, 1), Q(2009, 3))
    rank_hits = 0
    beats_benchmark = 0
    for rep in range(reps):
        panel = simulate_panel(seed=1000 + rep, n_predictors=20, n_quarters=200)
        models = direct_model_set(panel.gdp_level, panel.predictors, (horizon,))
        result = run_pseudo_oos(models, scheme, (horizon,), eval_range)
        report = build_report(result.records, AR_DIRECT, eval_range)
        rows = [r for r in report.at_horizon(horizon) if r.model != AR_DIRECT]
        rows.sort(key=lambda r: r.rank)
        true_row = next(r for r in rows if r.predictor == panel.true_predictor)
        rank_hits += rows[0].predictor == panel.true_predictor
        beats_benchmark += true_row.relative_msfe < 1.0
    elapsed = time.perf_counter() - start
    assert rank_hits >= 0.90 * reps, f"true predictor ranked first in {rank_hits}/{reps}"
    assert beats_benchmark >= 0.95 * reps, f"beat the benchmark in {beats_benchmark}/{reps}"
    assert elapsed < 300.0
    print(f"\nA4 synthetic recovery: PASS (rank-1 {rank_hits}/{reps}, "
          f"rel<1 {beats_benchmark}/{reps}, {elapsed:.1f}s)")


def test_a5_combination_weights():
    w = bma_weights([0.0, 2.0])
    assert_allclose(w, [0.7311, 0.2689], atol=1e-4)

    rng = np.random.default_rng(5)
    origins = [Q(2000, 1) + i for i in range(30)]
    records = {m: [] for m in ("a", "b", "c")}
    for origin in origins:
        for h in (4, 12):
            realized = rng.normal()
            for m in records:
                records[m].append(ForecastRecord(m, m, origin, h, "iterated",
                                                 realized + rng.normal(), realized))
    combined = combine_forecasts(records, equal_combination(list(records), origins), "comb")
    by_key = {m: {(r.origin, r.horizon): r for r in recs} for m, recs in records.items()}
    for rec in combined:
        member_fc = [by_key[m][(rec.origin, rec.horizon)].forecast for m in records]
        assert min(member_fc) - 1e-12 <= rec.forecast <= max(member_fc) + 1e-12
    print("\nA5 combination weights: PASS")


def test_a6_encompassing_statistic():
    assert enc_f([2.0, 2.0], [1.0, 1.0]) == 4.0
    assert enc_f([0.4, -0.7, 1.2], [0.4, -0.7, 1.2]) == 0.0
    print("\nA6 encompassing statistic: PASS")


HISTORICAL_DATA = os.environ.get("CYCLECAST_HISTORICAL_DATA", "")


@pytest.mark.skipif(
    not (HISTORICAL_DATA and (Path(HISTORICAL_DATA) / "config.toml").exists()),
    reason="set CYCLECAST_HISTORICAL_DATA to a directory with config.toml, panel.csv, "
           "and transforms.csv built from the historical sources (see README)")
def test_a7_historical_reproduction(tmp_path):
    start = time.perf_counter()
    config = str(Path(HISTORICAL_DATA) / "config.toml")
    out = tmp_path / "hist_out"

    assert main(["forecast-oos", "--config", config, "--out", str(out)]) == 0
    with (out / "benchmark_rmsfe.csv").open(newline="", encoding="utf-8") as fh:
        rows = {r["kind"]: r for r in csv.DictReader(fh)}
    reference = {4: 0.01764, 12: 0.04402, 20: 0.06211}
    for h, target in reference.items():
        got = float(rows["direct"][f"h{h}"])
        assert abs(got - target) / target <= 0.15, f"direct RMSFE h={h}: {got}"

    for tag in ("direct", "iterated"):
        for h in (12, 20):
            with (out / f"ranking_{tag}_h{h}.csv").open(newline="", encoding="utf-8") as fh:
                ranked = [r for r in csv.DictReader(fh)
                          if r["model"] not in ("ar_direct", "ar_iterated")]
            top_two = {r["predictor"] for r in ranked[:2]}
            assert top_two == {"capr", "NNBTILQ027SBDIx"}, f"{tag} h={h}: {top_two}"

    assert main(["rank-is", "--config", config, "--out", str(out)]) == 0
    reference_r2 = {12: 0.6253, 20: 0.6797}
    for h, target in reference_r2.items():
        with (out / f"rank_is_h{h}.csv").open(newline="", encoding="utf-8") as fh:
            ranked = list(csv.DictReader(fh))
        assert ranked[0]["label"] == "capr", f"h={h} top predictor: {ranked[0]['label']}"
        assert abs(float(ranked[0]["r2"]) - target) <= 0.05

    elapsed = time.perf_counter() - start
    assert elapsed < 1800.0
    print(f"\nA7 historical reproduction: PASS ({elapsed / 60:.1f} min)")
