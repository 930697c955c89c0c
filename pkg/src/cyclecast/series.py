"""Quarterly series and stationarity transformations.

A Series is a calendar-anchored vector of floats where NaN marks a missing
observation. Missing values are tolerated only as leading/trailing runs;
interior gaps are rejected at ingestion because every estimator downstream
assumes contiguous samples.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable

import numpy as np

from .errors import DataError, ProxyGap, TransformError
from .quarters import Quarter


class TransformCode(str, Enum):
    """Closed set of rules mapping a raw series to its model-ready form."""

    LEVEL = "level"
    LOG = "log"
    YOY_LOG_DIFF = "yoy_log_diff"
    YOY_DIFF = "yoy_diff"
    QOQ_LOG_DIFF = "qoq_log_diff"

    @classmethod
    def parse(cls, tag: str) -> TransformCode:
        try:
            return cls(tag.strip().lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise TransformError(f"unknown transform code {tag!r}; valid codes: {valid}") from None


class Series:
    """Immutable quarterly series: a start quarter plus a float vector.

    Values are addressable at quarters start <= q <= end; NaN means missing.
    """

    __slots__ = ("start", "values")

    def __init__(self, start: Quarter, values: Iterable[float]) -> None:
        arr = np.array(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise DataError("series needs a one-dimensional vector with at least one value")
        arr.setflags(write=False)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Series is immutable")

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> Quarter:
        return self.start + (len(self) - 1)

    def __contains__(self, q: Quarter) -> bool:
        return self.start <= q <= self.end

    def at(self, q: Quarter) -> float:
        """Value dated q; raises KeyError outside the support (NaN = missing)."""
        if q not in self:
            raise KeyError(f"{q} outside series support {self.start}..{self.end}")
        return float(self.values[q - self.start])

    def get(self, q: Quarter, default: float = np.nan) -> float:
        if q not in self:
            return default
        return float(self.values[q - self.start])

    def has(self, q: Quarter) -> bool:
        """True when a present (non-missing) value is dated q."""
        return q in self and not np.isnan(self.values[q - self.start])

    def window(self, a: Quarter, b: Quarter) -> np.ndarray:
        """Values for quarters a..b inclusive, NaN-padded outside the support."""
        n = b - a + 1
        if n <= 0:
            return np.empty(0)
        out = np.full(n, np.nan)
        lo = max(a, self.start)
        hi = min(b, self.end)
        if lo <= hi:
            out[lo - a : hi - a + 1] = self.values[lo - self.start : hi - self.start + 1]
        return out

    def first_valid(self) -> Quarter | None:
        idx = np.flatnonzero(~np.isnan(self.values))
        if idx.size == 0:
            return None
        return self.start + int(idx[0])

    def last_valid(self) -> Quarter | None:
        idx = np.flatnonzero(~np.isnan(self.values))
        if idx.size == 0:
            return None
        return self.start + int(idx[-1])

    def interior_gaps(self) -> list[Quarter]:
        """Quarters missing between the first and last present value."""
        idx = np.flatnonzero(~np.isnan(self.values))
        if idx.size < 2:
            return []
        inner = np.flatnonzero(np.isnan(self.values[idx[0] : idx[-1] + 1]))
        return [self.start + int(idx[0] + i) for i in inner]

    def check_contiguous(self, label: str = "series") -> None:
        gaps = self.interior_gaps()
        if gaps:
            shown = ", ".join(str(q) for q in gaps[:5])
            raise DataError(f"{label}: interior missing values at {shown}"
                            + (" ..." if len(gaps) > 5 else ""))

    def trim(self) -> Series:
        """Drop leading and trailing missing runs."""
        first, last = self.first_valid(), self.last_valid()
        if first is None:
            raise DataError("cannot trim an all-missing series")
        return Series(first, self.values[first - self.start : last - self.start + 1])

    def __repr__(self) -> str:
        return f"Series({self.start}..{self.end}, n={len(self)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.start == other.start and np.array_equal(self.values, other.values, equal_nan=True)

    def __hash__(self):  # pragma: no cover - identity hashing is intentional
        return id(self)


def _checked_log(values: np.ndarray, label: str, start: Quarter) -> np.ndarray:
    bad = np.flatnonzero(~np.isnan(values) & (values <= 0.0))
    if bad.size:
        q = start + int(bad[0])
        raise TransformError(f"{label}: log of non-positive value {values[bad[0]]} at {q}")
    with np.errstate(invalid="ignore"):
        return np.log(values)


def apply_transform(s: Series, code: TransformCode | str, label: str = "series") -> Series:
    """Transform a series in place on the calendar: the output value dated q
    is the transformed value at q. Year-on-year variants lose the first four
    observations, quarter-on-quarter the first one, level/log none.
    """
    code = TransformCode.parse(code) if isinstance(code, str) else code
    v = s.values
    if code is TransformCode.LEVEL:
        out = v.copy()
    elif code is TransformCode.LOG:
        out = _checked_log(v, label, s.start)
    elif code is TransformCode.YOY_LOG_DIFF:
        lv = _checked_log(v, label, s.start)
        out = np.full_like(lv, np.nan)
        out[4:] = lv[4:] - lv[:-4]
    elif code is TransformCode.YOY_DIFF:
        out = np.full_like(v, np.nan)
        out[4:] = v[4:] - v[:-4]
    elif code is TransformCode.QOQ_LOG_DIFF:
        lv = _checked_log(v, label, s.start)
        out = np.full_like(lv, np.nan)
        out[1:] = lv[1:] - lv[:-1]
    else:  # pragma: no cover - enum is closed
        raise TransformError(f"unhandled transform code {code}")
    return Series(s.start, out)


def cumulative_log_growth(s: Series, h: int) -> Series:
    """Log change over h quarters: value at q is ln s(q) - ln s(q-h)."""
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    if h >= len(s):
        raise DataError(f"h={h} is not shorter than the series ({len(s)} observations)")
    lv = _checked_log(s.values, "cumulative_log_growth", s.start)
    out = np.full_like(lv, np.nan)
    out[h:] = lv[h:] - lv[:-h]
    return Series(s.start, out)


def capr(hpi_real: Series, rent_real: Series, window: int = 40) -> Series:
    """Valuation ratio: real house price divided by the trailing mean of real
    rents over the preceding `window` quarters (lags 1..window, excluding the
    current quarter). Quarters without a fully covered rent window come out
    missing rather than raising.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    for s, name in ((hpi_real, "house price index"), (rent_real, "rent")):
        vals = s.values
        bad = np.flatnonzero(~np.isnan(vals) & (vals <= 0.0))
        if bad.size:
            raise TransformError(f"capr: non-positive {name} value at {s.start + int(bad[0])}")
    out = np.full(len(hpi_real), np.nan)
    for i in range(len(hpi_real)):
        q = hpi_real.start + i
        price = hpi_real.values[i]
        if np.isnan(price):
            continue
        rents = rent_real.window(q - window, q - 1)
        if np.isnan(rents).any():
            continue
        out[i] = price / rents.mean()
    return Series(hpi_real.start, out)


def splice_backward(base: Series, proxy: Series) -> Series:
    """Extend a series backward using the proxy's quarterly growth:
    value(q) = value(q+1) * proxy(q) / proxy(q+1) for quarters before the
    first observed base value. Base values are passed through untouched.
    """
    anchor = base.first_valid()
    if anchor is None:
        raise DataError("splice_backward: base series is entirely missing")
    proxy_first = proxy.first_valid()
    if proxy_first is None or not proxy.has(anchor):
        raise ProxyGap(f"proxy has no value at the base anchor {anchor}")
    ext_quarters = anchor - proxy_first  # how far back the proxy can reach
    if ext_quarters <= 0:
        return base.trim()

    trimmed = base.trim()
    out = np.concatenate([np.full(ext_quarters, np.nan), trimmed.values])
    for back in range(1, ext_quarters + 1):
        q = anchor - back
        ratio_num = proxy.get(q)
        ratio_den = proxy.get(q + 1)
        if np.isnan(ratio_num) or np.isnan(ratio_den):
            gap = q if np.isnan(ratio_num) else q + 1
            raise ProxyGap(f"proxy has no value at {gap} inside the extension range")
        if ratio_num == 0.0 or ratio_den == 0.0:
            zero = q if ratio_num == 0.0 else q + 1
            raise TransformError(f"splice_backward: zero proxy value at {zero}")
        out[ext_quarters - back] = out[ext_quarters - back + 1] * ratio_num / ratio_den
    return Series(anchor - ext_quarters, out)
