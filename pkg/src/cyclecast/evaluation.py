"""Pseudo-out-of-sample evaluation: window schemes, forecast records,
error statistics, encompassing tests, combinations, and rankings.

Estimation windows expand (or roll) one quarter at a time; at each window
end every model is re-selected, refit, and asked for its forecasts. Records
are kept only for targets inside the evaluation range, so at horizon h the
forecast origins are exactly that range shifted back by h quarters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ardl import ArdlSpec, fit_ardl
from .dataset import Dataset
from .errors import (
    AlignmentError,
    DataError,
    DegenerateFit,
    EstimationError,
    SampleTooShort,
)
from .quarters import Quarter, quarter_range
from .series import apply_transform, cumulative_log_growth

DEFAULT_EVAL_RANGE = (Quarter(1990, 1), Quarter(2017, 4))


@dataclass(frozen=True)
class WindowScheme:
    kind: str                      # recursive | rolling
    first_end: Quarter
    last_end: Quarter
    data_start: Quarter
    length: int | None = None      # rolling window size in quarters

    def __post_init__(self) -> None:
        if self.kind not in ("recursive", "rolling"):
            raise ValueError(f"kind must be recursive or rolling, got {self.kind!r}")
        if self.first_end > self.last_end:
            raise ValueError(f"first_end {self.first_end} is after last_end {self.last_end}")
        if self.kind == "rolling":
            if self.length is None or self.length < 2:
                raise ValueError("rolling windows need a length of at least 2 quarters")
        elif self.length is not None:
            raise ValueError("recursive windows have no fixed length")

    def windows(self) -> list[tuple[Quarter, Quarter]]:
        """Ordered (start, end) estimation samples, ends stepping one quarter."""
        ends = quarter_range(self.first_end, self.last_end)
        if self.kind == "recursive":
            return [(self.data_start, end) for end in ends]
        return [(end - (self.length - 1), end) for end in ends]


def recursive_scheme(data_start: Quarter, first_end: Quarter, last_end: Quarter) -> WindowScheme:
    return WindowScheme("recursive", first_end, last_end, data_start)


@dataclass(frozen=True)
class ForecastRecord:
    model: str
    predictor: str | None
    origin: Quarter
    horizon: int
    kind: str                      # direct | iterated
    forecast: float
    realized: float

    @property
    def error(self) -> float:
        return self.realized - self.forecast

    @property
    def target(self) -> Quarter:
        return self.origin + self.horizon

    def sort_key(self):
        return (self.model, self.origin.index, self.horizon)


@dataclass(frozen=True)
class OosResult:
    records: list[ForecastRecord]
    bics: dict[tuple[str, Quarter], float]
    skipped: list[tuple[str, Quarter, str]]

    def by_model(self) -> dict[str, list[ForecastRecord]]:
        out: dict[str, list[ForecastRecord]] = {}
        for r in self.records:
            out.setdefault(r.model, []).append(r)
        return out

    def select(self, model: str | None = None, horizon: int | None = None) -> list[ForecastRecord]:
        return [r for r in self.records
                if (model is None or r.model == model)
                and (horizon is None or r.horizon == horizon)]


def run_pseudo_oos(models, scheme: WindowScheme, horizons,
                   eval_range: tuple[Quarter, Quarter] = DEFAULT_EVAL_RANGE) -> OosResult:
    """Backtest every model over the window scheme.

    Each model object must expose `model_id`, `predictor`, `kind`,
    `forecast(window, horizons) -> (dict horizon->value, bic or None)` and
    `target_value(quarter, horizon)`. A model that cannot be estimated on a
    window is skipped for that window and reported in `skipped`.
    """
    horizons = sorted(set(horizons))
    if not horizons or min(horizons) < 1:
        raise ValueError("horizons must be positive integers")
    eval_start, eval_end = eval_range
    records: list[ForecastRecord] = []
    bics: dict[tuple[str, Quarter], float] = {}
    skipped: list[tuple[str, Quarter, str]] = []
    for window in scheme.windows():
        origin = window[1]
        hs = [h for h in horizons if eval_start <= origin + h <= eval_end]
        if not hs:
            continue
        for model in models:
            try:
                forecasts, crit = model.forecast(window, hs)
            except (EstimationError, DataError) as exc:
                skipped.append((model.model_id, origin, str(exc)))
                continue
            if crit is not None:
                bics[(model.model_id, origin)] = crit
            for h in hs:
                records.append(ForecastRecord(
                    model=model.model_id,
                    predictor=model.predictor,
                    origin=origin,
                    horizon=h,
                    kind=model.kind,
                    forecast=forecasts[h],
                    realized=model.target_value(origin + h, h),
                ))
    records.sort(key=ForecastRecord.sort_key)
    return OosResult(records, bics, skipped)


def _check_alignment(records, benchmark_records) -> None:
    a = sorted((r.origin.index, r.horizon) for r in records)
    b = sorted((r.origin.index, r.horizon) for r in benchmark_records)
    if a != b:
        raise AlignmentError(
            f"record sets cover different targets ({len(a)} vs {len(b)} records)")


def msfe(records) -> float:
    if not records:
        raise ValueError("no records")
    return float(np.mean([r.error**2 for r in records]))


def rmsfe(records) -> float:
    return math.sqrt(msfe(records))


def relative_msfe(records, benchmark_records) -> float:
    _check_alignment(records, benchmark_records)
    return msfe(records) / msfe(benchmark_records)


@dataclass(frozen=True)
class ReportRow:
    horizon: int
    model: str
    predictor: str | None
    count: int
    msfe: float
    rmsfe: float
    relative_msfe: float
    rank: int
    complete: bool


@dataclass(frozen=True)
class EvaluationReport:
    rows: list[ReportRow]
    eval_range: tuple[Quarter, Quarter]
    benchmark: str

    def at_horizon(self, h: int) -> list[ReportRow]:
        return [r for r in self.rows if r.horizon == h]


def build_report(result_records, benchmark: str,
                 eval_range: tuple[Quarter, Quarter] = DEFAULT_EVAL_RANGE) -> EvaluationReport:
    """Per (horizon, model) error statistics ranked by relative MSFE.

    Models missing some targets are still listed, compared to the benchmark
    on their own target set, but flagged as incomplete (non-comparable).
    """
    by_model: dict[str, list[ForecastRecord]] = {}
    for r in result_records:
        by_model.setdefault(r.model, []).append(r)
    if benchmark not in by_model:
        raise ValueError(f"benchmark {benchmark!r} has no records")
    horizons = sorted({r.horizon for r in result_records})
    rows: list[ReportRow] = []
    for h in horizons:
        bench_h = [r for r in by_model[benchmark] if r.horizon == h]
        bench_by_target = {r.origin: r for r in bench_h}
        full_count = len(bench_h)
        scored = []
        for model, recs in by_model.items():
            recs_h = [r for r in recs if r.horizon == h]
            if not recs_h:
                continue
            aligned_bench = [bench_by_target[r.origin] for r in recs_h
                             if r.origin in bench_by_target]
            if len(aligned_bench) != len(recs_h):
                raise AlignmentError(f"{model} has targets outside the benchmark set at h={h}")
            m = msfe(recs_h)
            rel = m / msfe(aligned_bench)
            predictor = recs_h[0].predictor
            scored.append((model, predictor, len(recs_h), m, rel))
        scored.sort(key=lambda t: (t[4], t[0]))
        for rank, (model, predictor, count, m, rel) in enumerate(scored, start=1):
            rows.append(ReportRow(h, model, predictor, count, m, math.sqrt(m), rel,
                                  rank, count == full_count))
    return EvaluationReport(rows, eval_range, benchmark)


@dataclass(frozen=True)
class InsampleRow:
    horizon: int
    rank: int
    label: str
    r_squared: float


@dataclass(frozen=True)
class InsampleReport:
    rows: list[InsampleRow]
    excluded: dict[int, list[str]]
    sample: tuple[Quarter, Quarter]

    def at_horizon(self, h: int) -> list[InsampleRow]:
        return [r for r in self.rows if r.horizon == h]


DEFAULT_INSAMPLE_RANGE = (Quarter(1974, 1), Quarter(2017, 4))


def rank_insample(data: Dataset, gdp_label: str, horizons,
                  sample: tuple[Quarter, Quarter] = DEFAULT_INSAMPLE_RANGE,
                  p: int = 5, q: int = 5) -> InsampleReport:
    """Fit one fixed-lag distributed-lag model per predictor per horizon on a
    common sample and rank by R-squared. Predictors without full data on the
    common regressor span are excluded and listed.
    """
    entry = data[gdp_label]
    if entry.raw is None:
        raise DataError(f"{gdp_label} needs its raw level series for target construction")
    gdp_level = entry.raw
    y = apply_transform(gdp_level, "yoy_log_diff", gdp_label)
    rows: list[InsampleRow] = []
    excluded: dict[int, list[str]] = {}
    for h in sorted(set(horizons)):
        y_h = cumulative_log_growth(gdp_level, h)
        start, end = sample
        y_first = max(start, y.first_valid())
        t_lo = max(y_h.first_valid(), y_first + h - 1 + p)
        t_hi = min(end, y_h.last_valid(), y.last_valid() + h)
        if t_hi - t_lo + 1 < p + q + 2:
            raise SampleTooShort(f"common sample too short at h={h}")
        need_lo, need_hi = t_lo - h + 1 - q, t_hi - h
        scored = []
        dropped = []
        for label in data.labels:
            if label == gdp_label:
                continue
            x = data.series(label)
            fv, lv = x.first_valid(), x.last_valid()
            if fv is None or fv > need_lo or lv < need_hi:
                dropped.append(label)
                continue
            fit = fit_ardl(ArdlSpec(h, p, q, label), y_h, y, x, sample)
            scored.append((label, fit.r_squared))
        scored.sort(key=lambda t: -t[1])
        for rank, (label, r2) in enumerate(scored, start=1):
            rows.append(InsampleRow(h, rank, label, r2))
        excluded[h] = dropped
    return InsampleReport(rows, excluded, sample)


def bma_weights(bics) -> np.ndarray:
    """exp(-BIC/2) normalized, with max-subtraction so large criteria cannot
    overflow; invariant to adding a constant to every entry.
    """
    arr = np.asarray(bics, dtype=float)
    if arr.size == 0:
        raise ValueError("no criteria to weight")
    if not np.all(np.isfinite(arr)):
        raise ValueError("criteria must be finite")
    z = -0.5 * arr
    z -= z.max()
    w = np.exp(z)
    return w / w.sum()


@dataclass(frozen=True)
class CombinationScheme:
    kind: str                                       # equal | bma
    weights: dict[Quarter, dict[str, float]]       # per window end, per model

    def __post_init__(self) -> None:
        if self.kind not in ("equal", "bma"):
            raise ValueError(f"kind must be equal or bma, got {self.kind!r}")
        for origin, w in self.weights.items():
            values = np.array(list(w.values()))
            if np.any(values < 0) or abs(values.sum() - 1.0) > 1e-12:
                raise ValueError(f"weights at {origin} must be non-negative and sum to 1")

    @property
    def members(self) -> list[str]:
        first = next(iter(self.weights.values()))
        return list(first)


def equal_combination(members, origins) -> CombinationScheme:
    members = list(members)
    w = {origin: {m: 1.0 / len(members) for m in members} for origin in origins}
    return CombinationScheme("equal", w)


def bma_combination(members, origins, bics: dict[tuple[str, Quarter], float]) -> CombinationScheme:
    """Window-by-window weights from each member's estimation criterion."""
    members = list(members)
    weights: dict[Quarter, dict[str, float]] = {}
    for origin in origins:
        try:
            crits = [bics[(m, origin)] for m in members]
        except KeyError as exc:
            raise AlignmentError(f"missing criterion for {exc.args[0]}") from None
        w = bma_weights(crits)
        weights[origin] = {m: float(w[i]) for i, m in enumerate(members)}
    return CombinationScheme("bma", weights)


def combine_forecasts(records_by_model: dict[str, list[ForecastRecord]],
                      scheme: CombinationScheme, model_id: str) -> list[ForecastRecord]:
    """Weighted average of member forecasts at every (origin, horizon)."""
    members = scheme.members
    if not members:
        raise ValueError("combination needs at least one member")
    indexed: dict[str, dict[tuple[Quarter, int], ForecastRecord]] = {}
    for m in members:
        recs = records_by_model.get(m)
        if not recs:
            raise AlignmentError(f"no records for combination member {m}")
        indexed[m] = {(r.origin, r.horizon): r for r in recs}
    base = indexed[members[0]]
    targets = sorted(base, key=lambda t: (t[0].index, t[1]))
    for m in members[1:]:
        if set(indexed[m]) != set(base):
            raise AlignmentError(f"member {m} covers different targets than {members[0]}")
    out: list[ForecastRecord] = []
    for origin, h in targets:
        if origin not in scheme.weights:
            raise AlignmentError(f"no combination weights for window ending {origin}")
        w = scheme.weights[origin]
        combined = 0.0
        realized = base[(origin, h)].realized
        kind = base[(origin, h)].kind
        for m in members:
            rec = indexed[m][(origin, h)]
            if rec.realized != realized:
                raise AlignmentError(f"members disagree on the realized value at {origin}+{h}")
            combined += w[m] * rec.forecast
        out.append(ForecastRecord(model_id, None, origin, h, kind, combined, realized))
    return out


def enc_f(benchmark_errors, model_errors) -> float:
    """Forecast-encompassing statistic: P * mean(u1*(u1-u2)) / MSFE2, where
    u1 are the nested benchmark's errors and u2 the nesting model's.
    """
    u1 = np.asarray(benchmark_errors, dtype=float)
    u2 = np.asarray(model_errors, dtype=float)
    if u1.size == 0 or u1.shape != u2.shape:
        raise AlignmentError(f"error vectors must align, got {u1.shape} and {u2.shape}")
    msfe2 = float(np.mean(u2**2))
    if msfe2 == 0.0:
        raise DegenerateFit("nesting model has zero MSFE")
    c = u1 * (u1 - u2)
    return float(u1.size * c.mean() / msfe2)


def convert_annual_forecasts(base_log_level: float, base_quarter: Quarter,
                             annual_rates) -> list[tuple[Quarter, float]]:
    """Chain annual growth rates onto a fourth-quarter starting level.

    Returns log levels dated at the last quarter of each successive forecast
    year: level(year n) = base * prod_{j<=n} (1 + rate_j).
    """
    if base_quarter.quarter != 4:
        raise ValueError(f"base quarter must be a Q4, got {base_quarter}")
    out = []
    level = base_log_level
    for i, rate in enumerate(annual_rates, start=1):
        if not np.isfinite(rate) or rate <= -1.0:
            raise ValueError(f"annual rate {rate} at position {i} is not chainable")
        level = level + math.log1p(rate)
        out.append((base_quarter + 4 * i, level))
    return out
