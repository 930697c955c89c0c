"""High-dimensional competitors and forecast combinations.

Shrinkage VAR over the whole panel, per-equation L1-penalized VAR, a
factor-augmented VAR, and equal-weight / criterion-weighted averages of the
single-predictor systems, all evaluated against the univariate benchmark.
Ends by writing an SVG chart of iterated forecast paths from one origin.
"""

from pathlib import Path

import numpy as np

from cyclecast import (
    Quarter,
    apply_transform,
    bma_combination,
    combine_forecasts,
    cumulate_log_levels,
    equal_combination,
    fit_var,
    iterate_var_forecast,
    msfe,
    quarter_range,
    recursive_scheme,
    run_pseudo_oos,
    select_var_lags,
    VarSpec,
)
from cyclecast.forecasters import (
    AR_ITERATED,
    FactorVarForecaster,
    LassoVarForecaster,
    LbvarForecaster,
    iterated_model_set,
)
from cyclecast.report import write_forecast_chart
from cyclecast.simulate import simulate_panel

panel = simulate_panel(seed=5, n_predictors=10, n_quarters=200)
scheme = recursive_scheme(Quarter(1962, 1), Quarter(1989, 1), Quarter(2008, 4))
horizons = (4, 12)
eval_range = (Quarter(1990, 1), Quarter(2009, 4))

single = run_pseudo_oos(iterated_model_set(panel.gdp_level, panel.predictors),
                        scheme, horizons, eval_range)
bench = {h: single.select(AR_ITERATED, h) for h in horizons}


def relative(records, h):
    recs = [r for r in records if r.horizon == h]
    return msfe(recs) / msfe(bench[h])


print("relative MSFE vs the univariate benchmark")
print(f"{'method':<22}" + "".join(f" h={h:<6}" for h in horizons))

hd_models = [
    LbvarForecaster("lbvar", panel.gdp_level, panel.predictors, lam=0.05),
    LassoVarForecaster("lasso_var", panel.gdp_level, panel.predictors, lam=0.002),
    FactorVarForecaster("factor", panel.gdp_level, panel.predictors, k=2),
]
for model in hd_models:
    result = run_pseudo_oos([model], scheme, horizons, eval_range)
    cells = "".join(f" {relative(result.records, h):<8.3f}" for h in horizons)
    print(f"{model.model_id:<22}{cells}")

members = [m for m in single.by_model() if m != AR_ITERATED]
origins = sorted({r.origin for r in single.records}, key=lambda q: q.index)
records_by_model = {m: single.by_model()[m] for m in members}
for name, scheme_obj in (
    ("comb_equal", equal_combination(members, origins)),
    ("comb_bma", bma_combination(members, origins, single.bics)),
):
    combined = combine_forecasts(records_by_model, scheme_obj, name)
    cells = "".join(f" {relative(combined, h):<8.3f}" for h in horizons)
    print(f"{name:<22}{cells}")

# --- chart two iterated paths from a fixed origin ----------------------------
origin = Quarter(2000, 1)
steps = 12
y = apply_transform(panel.gdp_level, "yoy_log_diff")
log_level = apply_transform(panel.gdp_level, "log")
paths = {}
for label in ("x01", "x02"):
    series = {"y": y, label: panel.predictors.series(label)}
    p = select_var_lags(("y", label), series, sample=(Quarter(1962, 1), origin))
    fit = fit_var(VarSpec(("y", label), p), series, (Quarter(1962, 1), origin))
    growth = iterate_var_forecast(fit, series, origin, steps)[:, 0]
    tail = np.array([log_level.at(origin - 3 + i) for i in range(4)])
    levels = cumulate_log_levels(growth, tail)
    paths[label] = [(origin + s, float(levels[s - 1])) for s in range(1, steps + 1)]

realized = [(q, log_level.at(q))
            for q in quarter_range(origin - 8, origin + steps)]
out = Path(__file__).resolve().parent / "output" / "forecast_paths.svg"
write_forecast_chart(out, realized, paths, title=f"Log GDP forecasts from {origin}")
print(f"\nwrote {out}")
