"""Recursive pseudo-out-of-sample backtest with direct and iterated forecasts.

At every window end each model re-selects its lags by BIC, refits, and
forecasts; errors are collected only for targets inside the evaluation
range, then ranked by MSFE relative to the autoregressive benchmark. The
encompassing statistic checks whether a predictor genuinely adds content.
"""

from cyclecast import (
    Quarter,
    build_report,
    enc_f,
    recursive_scheme,
    run_pseudo_oos,
)
from cyclecast.forecasters import (
    AR_DIRECT,
    AR_ITERATED,
    direct_model_set,
    iterated_model_set,
)
from cyclecast.simulate import simulate_panel

panel = simulate_panel(seed=21, n_predictors=8, n_quarters=232)
scheme = recursive_scheme(data_start=Quarter(1968, 2),
                          first_end=Quarter(1985, 1),
                          last_end=Quarter(2016, 4))
horizons = (4, 12, 20)
eval_range = (Quarter(1990, 1), Quarter(2017, 4))

print(f"windows: {scheme.kind}, ends {scheme.first_end}..{scheme.last_end}")
print(f"evaluation targets: {eval_range[0]}..{eval_range[1]} "
      f"(112 per horizon per model)\n")

for tag, benchmark, models in (
    ("direct", AR_DIRECT, direct_model_set(panel.gdp_level, panel.predictors, horizons)),
    ("iterated", AR_ITERATED, iterated_model_set(panel.gdp_level, panel.predictors)),
):
    result = run_pseudo_oos(models, scheme, horizons, eval_range)
    report = build_report(result.records, benchmark, eval_range)
    by_model = result.by_model()
    print(f"=== {tag} forecasts, MSFE relative to the benchmark ===")
    for h in horizons:
        rows = report.at_horizon(h)
        top = rows[:3]
        cells = ", ".join(f"{r.model}={r.relative_msfe:.3f}" for r in top)
        print(f"  h={h:>2}: {cells}")
        winner = next(r for r in rows if r.model != benchmark)
        bench_errors = sorted((r.origin.index, r.error)
                              for r in by_model[benchmark] if r.horizon == h)
        model_errors = sorted((r.origin.index, r.error)
                              for r in by_model[winner.model] if r.horizon == h)
        stat = enc_f([e for _, e in bench_errors], [e for _, e in model_errors])
        print(f"        best predictor {winner.model}: encompassing statistic {stat:.2f}")
    print()

print("The planted signal is x01. Its edge is largest at the one-year horizon")
print("and fades as the horizon outruns the predictor's persistence; noise")
print("predictors hovering near 1.0 are the expected pattern.")
