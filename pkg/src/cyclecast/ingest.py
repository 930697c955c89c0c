"""CSV ingestion and panel assembly.

Input panels are UTF-8 CSVs with a date column (YYYYQD or quarter-start
YYYY-MM-DD) followed by one column per raw series; empty cells are missing.
A transform-spec CSV drives assembly: each row names an output series, its
stationarity transform, and optionally a construction expression over other
labels (`A/B` for deflation-style ratios, `capr(price, rent[, window])` for
the valuation ratio) plus a backfill proxy label.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import Dataset, DatasetEntry
from .errors import DataError
from .quarters import Quarter, parse_quarter
from .series import Series, TransformCode, apply_transform, capr, splice_backward


@dataclass(frozen=True)
class TransformRow:
    label: str
    transform: TransformCode
    source: str = ""
    splice_proxy: str = ""
    group: str = ""


def _parse_date(text: str, row_number: int) -> Quarter:
    text = text.strip()
    if "-" in text:
        parts = text.split("-")
        if len(parts) != 3:
            raise DataError(f"row {row_number}: cannot parse date {text!r}")
        try:
            year, month = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataError(f"row {row_number}: cannot parse date {text!r}") from None
        if month not in (1, 4, 7, 10):
            raise DataError(f"row {row_number}: {text!r} is not a quarter-start date")
        return Quarter(year, (month - 1) // 3 + 1)
    try:
        return parse_quarter(text)
    except DataError:
        raise DataError(f"row {row_number}: cannot parse date {text!r}") from None


def read_panel_csv(path: str | Path) -> dict[str, Series]:
    """Raw series keyed by column label; missing cells become NaN and interior
    gaps are rejected. Rows must be consecutive quarters in ascending order.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if len(header) < 2:
            raise DataError(f"{path}: need a date column plus at least one series")
        labels = [c.strip() for c in header[1:]]
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise DataError(f"{path}: duplicate labels {dupes}")
        quarters: list[Quarter] = []
        columns: list[list[float]] = [[] for _ in labels]
        for row_number, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            q = _parse_date(row[0], row_number)
            if quarters and q != quarters[-1] + 1:
                raise DataError(f"row {row_number}: expected {quarters[-1] + 1}, got {q}")
            quarters.append(q)
            if len(row) != len(labels) + 1:
                raise DataError(f"row {row_number}: {len(row)} cells for {len(labels) + 1} columns")
            for j, cell in enumerate(row[1:]):
                cell = cell.strip()
                if not cell:
                    columns[j].append(np.nan)
                    continue
                try:
                    columns[j].append(float(cell))
                except ValueError:
                    raise DataError(
                        f"row {row_number}, column {labels[j]!r}: "
                        f"cannot parse value {cell!r}") from None
    if not quarters:
        raise DataError(f"{path}: no data rows")
    out: dict[str, Series] = {}
    for label, values in zip(labels, columns):
        series = Series(quarters[0], values)
        series.check_contiguous(label)
        out[label] = series
    return out


def read_transform_spec(path: str | Path) -> list[TransformRow]:
    path = Path(path)
    rows: list[TransformRow] = []
    seen: set[str] = set()
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"label", "transform"}
        if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
            raise DataError(f"{path}: header must include columns 'label' and 'transform'")
        for row_number, row in enumerate(reader, start=2):
            label = (row.get("label") or "").strip()
            if not label:
                raise DataError(f"{path} row {row_number}: empty label")
            if label in seen:
                raise DataError(f"{path} row {row_number}: duplicate label {label!r}")
            seen.add(label)
            rows.append(TransformRow(
                label=label,
                transform=TransformCode.parse((row.get("transform") or "").strip()),
                source=(row.get("source") or "").strip(),
                splice_proxy=(row.get("splice_proxy") or "").strip(),
                group=(row.get("group") or "").strip(),
            ))
    if not rows:
        raise DataError(f"{path}: no transform rows")
    return rows


def _split_top_level(text: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def _ratio(num: Series, den: Series, expr: str) -> Series:
    start = max(num.start, den.start)
    end = min(num.end, den.end)
    if end < start:
        raise DataError(f"{expr!r}: operand calendars do not overlap")
    a = num.window(start, end)
    b = den.window(start, end)
    zero = np.flatnonzero(~np.isnan(b) & (b == 0.0))
    if zero.size:
        raise DataError(f"{expr!r}: zero denominator at {start + int(zero[0])}")
    with np.errstate(invalid="ignore"):
        return Series(start, a / b)


def resolve_expression(expr: str, pool: dict[str, Series]) -> Series:
    """Evaluate a construction expression over the series pool.

    Grammar: LABEL | LABEL/LABEL | capr(expr, expr[, window]).
    """
    expr = expr.strip()
    if expr.startswith("capr(") and expr.endswith(")"):
        args = [a.strip() for a in _split_top_level(expr[5:-1])]
        if len(args) not in (2, 3):
            raise DataError(f"{expr!r}: capr takes (price, rent) with an optional window")
        price = resolve_expression(args[0], pool)
        rent = resolve_expression(args[1], pool)
        window = 40
        if len(args) == 3:
            try:
                window = int(args[2])
            except ValueError:
                raise DataError(f"{expr!r}: window must be an integer") from None
        return capr(price, rent, window)
    if "/" in expr:
        num_text, den_text = expr.split("/", 1)
        return _ratio(resolve_expression(num_text, pool),
                      resolve_expression(den_text, pool), expr)
    if expr not in pool:
        raise DataError(f"unknown label {expr!r} in expression")
    return pool[expr]


def ingest(csv_path: str | Path, transform_spec_path: str | Path) -> Dataset:
    """Parse the raw panel, build constructed series, apply transforms, and
    assemble the model-ready dataset. Raw (pre-transform) series are kept on
    each entry so level targets stay recoverable.
    """
    raw = read_panel_csv(csv_path)
    spec_rows = read_transform_spec(transform_spec_path)
    pool: dict[str, Series] = dict(raw)
    entries: dict[str, DatasetEntry] = {}
    for row in spec_rows:
        if row.source:
            base = resolve_expression(row.source, pool)
        elif row.label in raw:
            base = raw[row.label]
        else:
            raise DataError(f"{row.label!r}: no such raw column and no source expression")
        if row.splice_proxy:
            base = splice_backward(base, resolve_expression(row.splice_proxy, pool))
        pool[row.label] = base
        transformed = apply_transform(base, row.transform, row.label)
        transformed.check_contiguous(row.label)
        entries[row.label] = DatasetEntry(transformed, row.transform, row.group, raw=base)
    return Dataset(entries)
