"""Deterministic table and chart emission.

All CSVs are written with '\n' newlines and shortest-round-trip float
formatting, so identical inputs always produce byte-identical files. The
chart writer emits plain SVG 1.1 with fixed coordinates for the same reason.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .evaluation import EvaluationReport, ForecastRecord, InsampleReport, enc_f
from .quarters import Quarter


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(float(value))
    if isinstance(value, Quarter):
        return str(value)
    return str(value)


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(cell) for cell in row])
    path.write_text(buffer.getvalue(), encoding="utf-8", newline="\n")
    return path


def write_records(path: str | Path, records: list[ForecastRecord]) -> Path:
    header = ["model", "predictor", "kind", "origin", "horizon",
              "forecast", "realized", "error"]
    rows = [[r.model, r.predictor or "", r.kind, r.origin, r.horizon,
             r.forecast, r.realized, r.error] for r in records]
    return write_csv(path, header, rows)


def read_records(path: str | Path) -> list[ForecastRecord]:
    """Round-trip companion to write_records."""
    import csv

    from .quarters import parse_quarter

    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(ForecastRecord(
                model=row["model"],
                predictor=row["predictor"] or None,
                origin=parse_quarter(row["origin"]),
                horizon=int(row["horizon"]),
                kind=row["kind"],
                forecast=float(row["forecast"]),
                realized=float(row["realized"]),
            ))
    return out


def write_insample_ranking(out_dir: str | Path, report: InsampleReport,
                           top: int = 10) -> list[Path]:
    """Per-horizon rank files, the combined stack, and a wide top-N view."""
    out_dir = Path(out_dir)
    written = []
    header = ["rank", "label", "r2", "horizon"]
    horizons = sorted({r.horizon for r in report.rows})
    for h in horizons:
        rows = [[r.rank, r.label, r.r_squared, r.horizon] for r in report.at_horizon(h)]
        written.append(write_csv(out_dir / f"rank_is_h{h}.csv", header, rows))
    all_rows = [[r.rank, r.label, r.r_squared, r.horizon] for r in report.rows]
    written.append(write_csv(out_dir / "rank_is_all.csv", header, all_rows))

    wide_header = ["rank"]
    for h in horizons:
        wide_header += [f"label_h{h}", f"r2_h{h}"]
    wide_rows = []
    for i in range(top):
        row: list = [i + 1]
        for h in horizons:
            rows_h = report.at_horizon(h)
            if i < len(rows_h):
                row += [rows_h[i].label, rows_h[i].r_squared]
            else:
                row += ["", None]
        wide_rows.append(row)
    written.append(write_csv(out_dir / "rank_is_top.csv", wide_header, wide_rows))
    return written


def write_msfe_ranking(out_dir: str | Path, report: EvaluationReport, tag: str,
                       records_by_model: dict[str, list[ForecastRecord]] | None = None,
                       enc_f_thresholds: dict[int, float] | None = None) -> list[Path]:
    """Per-horizon relative-MSFE rankings; when the raw records are supplied,
    each non-benchmark row also carries the encompassing statistic against
    the benchmark, flagged against a user-supplied threshold table.
    """
    out_dir = Path(out_dir)
    written = []
    header = ["rank", "model", "predictor", "msfe", "rmsfe", "rel_msfe",
              "count", "complete", "enc_f", "enc_f_significant", "horizon"]
    horizons = sorted({r.horizon for r in report.rows})
    for h in horizons:
        rows = []
        bench_errors = None
        if records_by_model is not None:
            bench = [r for r in records_by_model[report.benchmark] if r.horizon == h]
            bench_errors = {r.origin: r.error for r in bench}
        for row in report.at_horizon(h):
            stat = None
            flag = ""
            if (bench_errors is not None and row.model != report.benchmark
                    and row.complete):
                recs = [r for r in records_by_model[row.model] if r.horizon == h]
                recs.sort(key=lambda r: r.origin.index)
                u1 = [bench_errors[r.origin] for r in recs]
                u2 = [r.error for r in recs]
                stat = enc_f(u1, u2)
                if enc_f_thresholds and h in enc_f_thresholds:
                    flag = "yes" if stat > enc_f_thresholds[h] else "no"
            rows.append([row.rank, row.model, row.predictor or "", row.msfe,
                         row.rmsfe, row.relative_msfe, row.count, row.complete,
                         stat, flag, h])
        written.append(write_csv(out_dir / f"ranking_{tag}_h{h}.csv", header, rows))
    return written


def write_benchmark_rmsfe(path: str | Path, by_kind: dict[str, dict[int, float]],
                          horizons) -> Path:
    header = ["kind"] + [f"h{h}" for h in horizons]
    rows = []
    for kind in sorted(by_kind):
        rows.append([kind] + [by_kind[kind].get(h) for h in horizons])
    return write_csv(path, header, rows)


def write_hd_comparison(path: str | Path, rows: list[tuple[str, int, float | None, str]]) -> Path:
    """Rows of (method, horizon, relative msfe, winning grid point)."""
    return write_csv(path, ["method", "horizon", "rel_msfe", "best_params"], rows)


_PALETTE = ["#1b6ca8", "#c0392b", "#1e8449", "#8e44ad", "#d68910",
            "#17a589", "#884ea0", "#2e4053"]


def render_forecast_chart(realized: list[tuple[Quarter, float]],
                          paths: dict[str, list[tuple[Quarter, float]]],
                          title: str = "Forecast comparison",
                          width: int = 820, height: int = 500) -> str:
    """SVG line chart: the realized log-level series plus one polyline per
    model forecast path. Output is a deterministic function of the inputs.
    """
    if not paths:
        raise ValueError("select at least one model path to chart")
    if not realized:
        raise ValueError("realized series is empty")
    margin = 56
    all_points = list(realized) + [pt for pts in paths.values() for pt in pts]
    qs = [q.index for q, _ in all_points]
    vs = [v for _, v in all_points]
    q_lo, q_hi = min(qs), max(qs)
    v_lo, v_hi = min(vs), max(vs)
    if q_hi == q_lo:
        q_hi += 1
    pad = (v_hi - v_lo) * 0.05 or 0.01
    v_lo, v_hi = v_lo - pad, v_hi + pad

    def sx(qi: int) -> float:
        return margin + (qi - q_lo) / (q_hi - q_lo) * (width - 2 * margin)

    def sy(v: float) -> float:
        return height - margin - (v - v_lo) / (v_hi - v_lo) * (height - 2 * margin)

    def polyline(points, color, dash="") -> str:
        coords = " ".join(f"{sx(q.index):.2f},{sy(v):.2f}" for q, v in points)
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        return (f'<polyline fill="none" stroke="{color}" stroke-width="1.8"'
                f'{dash_attr} points="{coords}"/>')

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="#333" stroke-width="1"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="#333" stroke-width="1"/>',
        f'<text x="{margin}" y="{height - margin + 18}" font-family="sans-serif" '
        f'font-size="11">{Quarter.from_index(q_lo)}</text>',
        f'<text x="{width - margin}" y="{height - margin + 18}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{Quarter.from_index(q_hi)}</text>',
        f'<text x="{margin - 6}" y="{sy(v_lo):.2f}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{v_lo:.3f}</text>',
        f'<text x="{margin - 6}" y="{sy(v_hi):.2f}" text-anchor="end" '
        f'font-family="sans-serif" font-size="11">{v_hi:.3f}</text>',
        polyline(realized, "#222222"),
    ]
    legend_y = margin
    parts.append(f'<text x="{width - margin + 4}" y="{legend_y}" font-family="sans-serif" '
                 f'font-size="11" text-anchor="end">realized</text>')
    for i, (model, pts) in enumerate(paths.items()):
        color = _PALETTE[i % len(_PALETTE)]
        parts.append(polyline(pts, color, dash="6,3"))
        legend_y += 16
        parts.append(f'<text x="{width - margin + 4}" y="{legend_y}" fill="{color}" '
                     f'font-family="sans-serif" font-size="11" text-anchor="end">{model}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_forecast_chart(path: str | Path, realized, paths, title="Forecast comparison") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_forecast_chart(realized, paths, title),
                    encoding="utf-8", newline="\n")
    return path
