"""Command-line front end.

Subcommands: ingest, rank-is, forecast-oos, compare-hd, chart, simulate.
Configuration is a TOML document whose defaults encode the full
quarterly-backtest protocol, so a bare command on prepared data runs the
standard evaluation. Exit codes: 0 success, 2 config error, 3 data error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .dataset import Dataset
from .errors import (
    AlignmentError,
    ConfigError,
    CyclecastError,
    DataError,
    EstimationError,
)
from .evaluation import (
    ForecastRecord,
    bma_combination,
    build_report,
    combine_forecasts,
    convert_annual_forecasts,
    equal_combination,
    rank_insample,
    recursive_scheme,
    run_pseudo_oos,
    WindowScheme,
    msfe,
)
from .forecasters import (
    AR_DIRECT,
    AR_ITERATED,
    FactorVarForecaster,
    LassoVarForecaster,
    LbvarForecaster,
    direct_model_set,
    iterated_model_set,
)
from .ingest import ingest
from .quarters import Quarter, parse_quarter, quarter_range
from .report import (
    write_benchmark_rmsfe,
    write_csv,
    write_forecast_chart,
    write_hd_comparison,
    write_insample_ranking,
    write_msfe_ranking,
    write_records,
)
from .series import apply_transform
from .simulate import simulate_panel
from .var import VarSpec, cumulate_log_levels, fit_var, iterate_var_forecast, select_var_lags

_DEFAULTS = {
    "data": {
        "panel": "",
        "transforms": "",
        "gdp": "",
        "external_forecasts": "",
        "enc_f_thresholds": "",
    },
    "run": {
        "horizons": [4, 12, 20],
        "data_start": "1968Q2",
        "first_window_end": "1985Q1",
        "eval_start": "1990Q1",
        "eval_end": "2017Q4",
        "window": "recursive",
        "insample_start": "1974Q1",
        "insample_end": "2017Q4",
        "start_cutoff": "1967Q1",
        "exclude_groups": ["aux"],
    },
    "grids": {
        "lbvar_lambdas": [0.0001, 0.0005, 0.001, 0.005, 0.01, 0.05, 0.1],
        "lbvar_tau_multipliers": [10.0, 100.0],
        "lasso_lambdas": [0.00025, 0.0005, 0.00075, 0.001, 0.00125, 0.0015],
        "factor_counts": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
    },
    "output": {"dir": "out"},
}


@dataclass
class RunConfig:
    panel: Path
    transforms: Path
    gdp: str
    out_dir: Path
    horizons: list[int]
    data_start: Quarter
    first_window_end: Quarter
    eval_range: tuple[Quarter, Quarter]
    window_kind: str
    window_length: int | None
    insample_range: tuple[Quarter, Quarter]
    start_cutoff: Quarter
    exclude_groups: list[str]
    grids: dict
    external_forecasts: Path | None = None
    enc_f_thresholds: Path | None = None
    base_dir: Path = field(default_factory=Path)


def _merge_config(defaults: dict, loaded: dict, path: str = "") -> dict:
    merged = {}
    for key, default in defaults.items():
        merged[key] = default
    for key, value in loaded.items():
        where = f"{path}.{key}" if path else key
        if key not in defaults:
            raise ConfigError(f"unknown configuration key {where!r}")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where!r} must be a table")
            merged[key] = _merge_config(defaults[key], value, where)
        else:
            merged[key] = value
    return merged


def _parse_window(text: str) -> tuple[str, int | None]:
    if text == "recursive":
        return "recursive", None
    if text.startswith("rolling:"):
        try:
            length = int(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad window spec {text!r}") from None
        return "rolling", length
    raise ConfigError(f"window must be 'recursive' or 'rolling:N', got {text!r}")


def _quarter(text: str, what: str) -> Quarter:
    try:
        return parse_quarter(str(text))
    except DataError:
        raise ConfigError(f"{what}: cannot parse quarter {text!r}") from None


def load_config(path: str | None, args: argparse.Namespace) -> RunConfig:
    loaded: dict = {}
    base_dir = Path.cwd()
    if path:
        cfg_path = Path(path)
        if not cfg_path.exists():
            raise ConfigError(f"config file {cfg_path} does not exist")
        with cfg_path.open("rb") as fh:
            try:
                loaded = tomllib.load(fh)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{cfg_path}: {exc}") from None
        base_dir = cfg_path.parent
    cfg = _merge_config(_DEFAULTS, loaded)

    horizons = cfg["run"]["horizons"]
    if getattr(args, "horizons", None):
        try:
            horizons = [int(tok) for tok in args.horizons.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"bad horizon list {args.horizons!r}") from None
    if not horizons or any(h < 1 for h in horizons):
        raise ConfigError("horizons must be positive quarter counts")

    window_text = getattr(args, "window", None) or cfg["run"]["window"]
    kind, length = _parse_window(window_text)

    out_dir = Path(getattr(args, "out", None) or cfg["output"]["dir"])

    def data_path(key: str) -> Path | None:
        raw = cfg["data"][key]
        if not raw:
            return None
        p = Path(raw)
        return p if p.is_absolute() else base_dir / p

    eval_range = (_quarter(cfg["run"]["eval_start"], "eval_start"),
                  _quarter(cfg["run"]["eval_end"], "eval_end"))
    if eval_range[0] > eval_range[1]:
        raise ConfigError("eval_start is after eval_end")
    insample = (_quarter(cfg["run"]["insample_start"], "insample_start"),
                _quarter(cfg["run"]["insample_end"], "insample_end"))
    return RunConfig(
        panel=data_path("panel"),
        transforms=data_path("transforms"),
        gdp=cfg["data"]["gdp"],
        out_dir=out_dir,
        horizons=sorted(set(horizons)),
        data_start=_quarter(cfg["run"]["data_start"], "data_start"),
        first_window_end=_quarter(cfg["run"]["first_window_end"], "first_window_end"),
        eval_range=eval_range,
        window_kind=kind,
        window_length=length,
        insample_range=insample,
        start_cutoff=_quarter(cfg["run"]["start_cutoff"], "start_cutoff"),
        exclude_groups=list(cfg["run"]["exclude_groups"]),
        grids=cfg["grids"],
        external_forecasts=data_path("external_forecasts"),
        enc_f_thresholds=data_path("enc_f_thresholds"),
        base_dir=base_dir,
    )


def _load_dataset(config: RunConfig) -> tuple[Dataset, str]:
    if config.panel is None or config.transforms is None:
        raise ConfigError("data.panel and data.transforms must be configured")
    if not config.gdp:
        raise ConfigError("data.gdp must name the GDP level column")
    dataset = ingest(config.panel, config.transforms)
    if config.gdp not in dataset:
        raise DataError(f"GDP label {config.gdp!r} not found in the assembled dataset")
    if dataset[config.gdp].raw is None:
        raise DataError(f"{config.gdp!r} has no raw level series")
    return dataset, config.gdp


def _modeling_predictors(config: RunConfig, dataset: Dataset, gdp: str) -> Dataset:
    """Everything except the target and construction-only (aux) entries."""
    drop = [gdp]
    drop += [label for label in dataset.labels
             if dataset[label].group in config.exclude_groups]
    return dataset.without(sorted(set(drop)))


def _check_eval_range(config: RunConfig, gdp_level) -> None:
    first, last = gdp_level.first_valid(), gdp_level.last_valid()
    if config.eval_range[1] > last or config.eval_range[0] < first:
        raise ConfigError(
            f"evaluation range {config.eval_range[0]}..{config.eval_range[1]} "
            f"exceeds the GDP data span {first}..{last}")
    if config.data_start < first:
        raise ConfigError(f"data_start {config.data_start} precedes the GDP data ({first})")


def _scheme(config: RunConfig) -> WindowScheme:
    last_end = config.eval_range[1] - min(config.horizons)
    if config.window_kind == "recursive":
        return recursive_scheme(config.data_start, config.first_window_end, last_end)
    return WindowScheme("rolling", config.first_window_end, last_end,
                        config.data_start, length=config.window_length)


def _read_enc_f_thresholds(path: Path | None) -> dict[int, float]:
    if path is None:
        return {}
    out: dict[int, float] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                out[int(row["horizon"])] = float(row["threshold"])
            except (KeyError, ValueError):
                raise DataError(f"{path}: rows need integer 'horizon' and numeric 'threshold'") from None
    return out


def cmd_ingest(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    dataset, _ = _load_dataset(config)
    rows = dataset.summary()
    path = write_csv(config.out_dir / "ingest_summary.csv",
                     ["label", "transform", "first_valid", "last_valid"], rows)
    print(f"{len(dataset)} series assembled; summary written to {path}")
    for label, code, first, last in rows:
        print(f"  {label}: {code} [{first} .. {last}]")
    for threshold in (0.90, 0.95, 1.0):
        try:
            q = dataset.coverage_start(threshold)
        except CyclecastError:
            continue
        print(f"coverage >= {threshold:.0%} from {q}")
    return 0


def _check_direct_horizons(config: RunConfig) -> None:
    from .ardl import HORIZONS

    bad = [h for h in config.horizons if h not in HORIZONS]
    if bad:
        raise ConfigError(f"direct models support horizons {HORIZONS}, got {bad}")


def cmd_rank_is(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    _check_direct_horizons(config)
    dataset, gdp = _load_dataset(config)
    aux = [label for label in dataset.labels
           if label != gdp and dataset[label].group in config.exclude_groups]
    report = rank_insample(dataset.without(aux), gdp, config.horizons,
                           config.insample_range)
    written = write_insample_ranking(config.out_dir, report)
    for h, dropped in sorted(report.excluded.items()):
        if dropped:
            print(f"h={h}: excluded {len(dropped)} predictors without full data: "
                  + ", ".join(dropped))
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_forecast_oos(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    _check_direct_horizons(config)
    dataset, gdp = _load_dataset(config)
    gdp_level = dataset[gdp].raw
    _check_eval_range(config, gdp_level)
    predictors = _modeling_predictors(config, dataset, gdp)
    scheme = _scheme(config)
    thresholds = _read_enc_f_thresholds(config.enc_f_thresholds)

    direct = run_pseudo_oos(direct_model_set(gdp_level, predictors, config.horizons),
                            scheme, config.horizons, config.eval_range)
    iterated = run_pseudo_oos(iterated_model_set(gdp_level, predictors),
                              scheme, config.horizons, config.eval_range)
    for result, tag in ((direct, "direct"), (iterated, "iterated")):
        for model, origin, reason in result.skipped:
            print(f"notice: {tag} {model} skipped at {origin}: {reason}")

    all_records = sorted(direct.records + iterated.records, key=ForecastRecord.sort_key)
    written = [write_records(config.out_dir / "records.csv", all_records)]
    benchmark_rmsfe: dict[str, dict[int, float]] = {"direct": {}, "iterated": {}}
    for result, tag, benchmark in ((direct, "direct", AR_DIRECT),
                                   (iterated, "iterated", AR_ITERATED)):
        report = build_report(result.records, benchmark, config.eval_range)
        written += write_msfe_ranking(config.out_dir, report, tag,
                                      result.by_model(), thresholds)
        for h in config.horizons:
            benchmark_rmsfe[tag][h] = math.sqrt(msfe(result.select(benchmark, h)))
    written.append(write_benchmark_rmsfe(config.out_dir / "benchmark_rmsfe.csv",
                                         benchmark_rmsfe, config.horizons))
    for path in written:
        print(f"wrote {path}")
    return 0


def _read_external_records(config: RunConfig, gdp_level) -> list[ForecastRecord]:
    """Annual external forecasts, chained onto fourth-quarter starting levels
    and dated at the last quarter of each forecast year.
    """
    path = config.external_forecasts
    if path is None:
        return []
    log_level = apply_transform(gdp_level, "log")
    by_vintage: dict[int, list[tuple[int, float]]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                vintage = int(row["vintage_year"])
                target = int(row["target_year"])
                rate = float(row["annual_rate"])
            except (KeyError, ValueError):
                raise DataError(
                    f"{path}: rows need vintage_year, target_year, annual_rate") from None
            by_vintage.setdefault(vintage, []).append((target, rate))
    records: list[ForecastRecord] = []
    eval_start, eval_end = config.eval_range
    for vintage, pairs in sorted(by_vintage.items()):
        base_quarter = Quarter(vintage - 1, 4)
        if not log_level.has(base_quarter):
            continue
        pairs.sort()
        expected = list(range(vintage, vintage + len(pairs)))
        if [t for t, _ in pairs] != expected:
            raise DataError(f"{path}: vintage {vintage} must cover consecutive years")
        levels = convert_annual_forecasts(log_level.at(base_quarter), base_quarter,
                                          [r for _, r in pairs])
        for target_quarter, level in levels:
            h = target_quarter - base_quarter
            if h not in config.horizons:
                continue
            if not (eval_start <= target_quarter <= eval_end):
                continue
            if not log_level.has(target_quarter):
                continue
            records.append(ForecastRecord("external", None, base_quarter, h,
                                          "iterated", level,
                                          log_level.at(target_quarter)))
    records.sort(key=ForecastRecord.sort_key)
    return records


def _aligned_relative_msfe(records, benchmark_records) -> float | None:
    bench = {(r.origin, r.horizon): r for r in benchmark_records}
    try:
        matched = [bench[(r.origin, r.horizon)] for r in records]
    except KeyError:
        return None
    if not records:
        return None
    return msfe(records) / msfe(matched)


def _grid_best(config: RunConfig, make_forecaster, grid, scheme, benchmark_by_h):
    """Backtest every grid point; per horizon keep the lowest relative MSFE.

    A grid point is eligible at a horizon only with records at every
    benchmark target, so all candidates are scored over the same period;
    windows a point could not be estimated on are reported.
    """
    best: dict[int, tuple[float, str]] = {}
    for params, label in grid:
        forecaster = make_forecaster(params)
        result = run_pseudo_oos([forecaster], scheme, config.horizons, config.eval_range)
        if result.skipped:
            reason = result.skipped[0][2]
            print(f"notice: {forecaster.model_id} ({label}) skipped on "
                  f"{len(result.skipped)} windows: {reason}")
        for h in config.horizons:
            recs = result.select(forecaster.model_id, h)
            if len(recs) != len(benchmark_by_h[h]):
                continue
            rel = _aligned_relative_msfe(recs, benchmark_by_h[h])
            if rel is None:
                continue
            if h not in best or rel < best[h][0]:
                best[h] = (rel, label)
    return best


def cmd_compare_hd(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    dataset, gdp = _load_dataset(config)
    gdp_level = dataset[gdp].raw
    _check_eval_range(config, gdp_level)
    predictors = _modeling_predictors(config, dataset, gdp)
    scheme = _scheme(config)

    single = run_pseudo_oos(iterated_model_set(gdp_level, predictors),
                            scheme, config.horizons, config.eval_range)
    by_model = single.by_model()
    benchmark_by_h = {h: single.select(AR_ITERATED, h) for h in config.horizons}
    full_counts = {h: len(benchmark_by_h[h]) for h in config.horizons}

    members = []
    for model, recs in by_model.items():
        if model == AR_ITERATED:
            continue
        counts = {h: sum(1 for r in recs if r.horizon == h) for h in config.horizons}
        if counts == full_counts:
            members.append(model)
    if not members:
        raise DataError("no predictor has full coverage; combinations are impossible")
    dropped = sorted(set(by_model) - set(members) - {AR_ITERATED})
    if dropped:
        print(f"notice: {len(dropped)} short-history predictors excluded from combinations: "
              + ", ".join(dropped))

    origins = sorted({r.origin for r in single.records}, key=lambda q: q.index)
    rows: list[tuple[str, int, float | None, str]] = []

    hd_panel = predictors.filter_by_start(config.start_cutoff)
    outside = len(predictors) - len(hd_panel)
    if outside:
        print(f"notice: {outside} predictors start after {config.start_cutoff}; "
              f"high-dimensional models use the remaining {len(hd_panel)}")

    lbvar_grid = [((lam, mult * lam), f"lambda={lam:g},tau={mult * lam:g}")
                  for lam in config.grids["lbvar_lambdas"]
                  for mult in config.grids["lbvar_tau_multipliers"]]
    best = _grid_best(config,
                      lambda p: LbvarForecaster("lbvar", gdp_level, hd_panel,
                                                lam=p[0], tau=p[1]),
                      lbvar_grid, scheme, benchmark_by_h)
    rows += [("lbvar", h, best.get(h, (None, ""))[0], best.get(h, (None, ""))[1])
             for h in config.horizons]

    lasso_grid = [((lam,), f"lambda={lam:g}") for lam in config.grids["lasso_lambdas"]]
    best = _grid_best(config,
                      lambda p: LassoVarForecaster("lasso_var", gdp_level, hd_panel,
                                                   lam=p[0]),
                      lasso_grid, scheme, benchmark_by_h)
    rows += [("lasso_var", h, best.get(h, (None, ""))[0], best.get(h, (None, ""))[1])
             for h in config.horizons]

    max_k = max(1, min(len(hd_panel.labels), max(config.grids["factor_counts"])))
    factor_grid = [((k,), f"k={k}") for k in config.grids["factor_counts"] if k <= max_k]
    best = _grid_best(config,
                      lambda p: FactorVarForecaster("factor", gdp_level, hd_panel, k=p[0]),
                      factor_grid, scheme, benchmark_by_h)
    rows += [("factor", h, best.get(h, (None, ""))[0], best.get(h, (None, ""))[1])
             for h in config.horizons]

    member_records = {m: by_model[m] for m in members}
    equal = combine_forecasts(member_records, equal_combination(members, origins),
                              "comb_equal")
    bma = combine_forecasts(member_records,
                            bma_combination(members, origins, single.bics), "comb_bma")
    for model_id, recs in (("comb_equal", equal), ("comb_bma", bma)):
        for h in config.horizons:
            recs_h = [r for r in recs if r.horizon == h]
            rel = _aligned_relative_msfe(recs_h, benchmark_by_h[h])
            rows.append((model_id, h, rel, f"members={len(members)}"))

    external = _read_external_records(config, gdp_level)
    for h in config.horizons:
        recs_h = [r for r in external if r.horizon == h]
        rel = _aligned_relative_msfe(recs_h, benchmark_by_h[h]) if recs_h else None
        rows.append(("external", h, rel, ""))

    rows.sort(key=lambda r: (r[0], r[1]))
    path = write_hd_comparison(config.out_dir / "hd_comparison.csv", rows)
    combined = sorted(equal + bma + external, key=ForecastRecord.sort_key)
    record_path = write_records(config.out_dir / "hd_records.csv", combined)
    print(f"wrote {path}")
    print(f"wrote {record_path}")
    return 0


def cmd_chart(args: argparse.Namespace) -> int:
    config = load_config(args.config, args)
    models = [tok.strip() for tok in (args.models or "").split(",") if tok.strip()]
    if not models:
        raise ConfigError("chart needs --models with at least one predictor label")
    origin = _quarter(args.origin, "--origin")
    steps = args.steps or max(config.horizons)
    dataset, gdp = _load_dataset(config)
    gdp_level = dataset[gdp].raw
    y = apply_transform(gdp_level, "yoy_log_diff")
    log_level = apply_transform(gdp_level, "log")
    if not all(log_level.has(origin - 3 + i) for i in range(4)):
        raise DataError(f"need four observed GDP levels through {origin} to chart from there")

    paths: dict[str, list[tuple[Quarter, float]]] = {}
    window = (config.data_start, origin)
    for label in models:
        if label not in dataset:
            raise DataError(f"unknown predictor {label!r}")
        series = {"y": y, label: dataset.series(label)}
        p = select_var_lags(("y", label), series, sample=window)
        fit = fit_var(VarSpec(("y", label), p), series, window)
        growth_path = iterate_var_forecast(fit, series, origin, steps)[:, 0]
        tail = [log_level.at(origin - 3 + i) for i in range(4)]
        levels = cumulate_log_levels(growth_path, tail)
        paths[label] = [(origin + s, float(levels[s - 1])) for s in range(1, steps + 1)]

    hist_start = max(log_level.first_valid(), origin - 12)
    hist_end = min(log_level.last_valid(), origin + steps)
    realized = [(q, log_level.at(q)) for q in quarter_range(hist_start, hist_end)]
    out_path = config.out_dir / (args.name or "forecast_chart.svg")
    write_forecast_chart(out_path, realized, paths,
                         title=f"Log GDP forecasts from {origin}")
    print(f"wrote {out_path}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else 0
    out_dir = Path(args.out or "fixture")
    panel = simulate_panel(seed, n_predictors=args.predictors, n_quarters=args.quarters)
    labels = panel.predictors.labels
    header = ["date", "GDP"] + labels
    rows = []
    start = panel.gdp_level.start
    for i in range(len(panel.gdp_level)):
        q = start + i
        row = [q, panel.gdp_level.values[i]]
        row += [panel.predictors.series(l).values[i] for l in labels]
        rows.append(row)
    panel_path = write_csv(out_dir / "panel.csv", header, rows)
    spec_rows = [["GDP", "yoy_log_diff", "", "", "target"]]
    spec_rows += [[l, "level", "", "", "predictor"] for l in labels]
    spec_path = write_csv(out_dir / "transforms.csv",
                          ["label", "transform", "source", "splice_proxy", "group"],
                          spec_rows)
    config_path = out_dir / "run.toml"
    span_start = str(start)
    config_path.write_text(
        "\n".join([
            "[data]",
            'panel = "panel.csv"',
            'transforms = "transforms.csv"',
            'gdp = "GDP"',
            "",
            "[run]",
            f'data_start = "{start + 8}"',
            f'first_window_end = "{start + 100}"',
            f'eval_start = "{start + 120}"',
            f'eval_end = "{panel.gdp_level.end}"',
            "",
            "[output]",
            'dir = "out"',
            "",
        ]),
        encoding="utf-8")
    print(f"wrote {panel_path} ({len(rows)} quarters from {span_start}, seed {seed})")
    print(f"wrote {spec_path}")
    print(f"wrote {config_path}")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="TOML configuration file")
    sub.add_argument("--out", help="output directory (overrides config)")
    sub.add_argument("--horizons", help="comma-separated forecast horizons, e.g. 4,12,20")
    sub.add_argument("--window", help="estimation windows: recursive or rolling:N")
    sub.add_argument("--seed", type=int, help="random seed for simulation commands")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclecast",
        description="Quarterly macro forecasting with financial-cycle indicators")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("ingest", help="parse and assemble the panel, report coverage")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = subs.add_parser("rank-is", help="in-sample predictor ranking by R-squared")
    _add_common(p)
    p.set_defaults(func=cmd_rank_is)

    p = subs.add_parser("forecast-oos", help="recursive pseudo-out-of-sample backtest")
    _add_common(p)
    p.set_defaults(func=cmd_forecast_oos)

    p = subs.add_parser("compare-hd", help="high-dimensional models and combinations")
    _add_common(p)
    p.set_defaults(func=cmd_compare_hd)

    p = subs.add_parser("chart", help="render forecast paths against realized GDP")
    _add_common(p)
    p.add_argument("--origin", required=True, help="forecast origin, e.g. 2007Q2")
    p.add_argument("--models", required=True, help="comma-separated predictor labels")
    p.add_argument("--steps", type=int, help="quarters to iterate (default max horizon)")
    p.add_argument("--name", help="output file name (default forecast_chart.svg)")
    p.set_defaults(func=cmd_chart)

    p = subs.add_parser("simulate", help="write a seeded synthetic fixture")
    _add_common(p)
    p.add_argument("--predictors", type=int, default=20)
    p.add_argument("--quarters", type=int, default=232)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (EstimationError, AlignmentError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except CyclecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
