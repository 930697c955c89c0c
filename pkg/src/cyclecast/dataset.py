"""Labeled panel of transformed quarterly series with coverage bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CoverageError, DataError
from .quarters import Quarter
from .series import Series, TransformCode


@dataclass(frozen=True)
class DatasetEntry:
    series: Series                # transformed, model-ready
    transform: TransformCode
    group: str = ""
    raw: Series | None = None     # pre-transform series, kept when target levels are needed


class Dataset:
    """Insertion-ordered map from label to entry; all series share the
    quarterly calendar, so coverage at any quarter is well defined.
    """

    def __init__(self, entries: dict[str, DatasetEntry] | None = None) -> None:
        self._entries: dict[str, DatasetEntry] = {}
        for label, entry in (entries or {}).items():
            self._add(label, entry)

    def _add(self, label: str, entry: DatasetEntry) -> None:
        if label in self._entries:
            raise DataError(f"duplicate label {label!r}")
        entry.series.check_contiguous(label)
        self._entries[label] = entry

    @property
    def labels(self) -> list[str]:
        return list(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, label: str) -> bool:
        return label in self._entries

    def __getitem__(self, label: str) -> DatasetEntry:
        try:
            return self._entries[label]
        except KeyError:
            raise DataError(f"unknown label {label!r}") from None

    def series(self, label: str) -> Series:
        return self[label].series

    def series_map(self) -> dict[str, Series]:
        return {label: e.series for label, e in self._entries.items()}

    def with_entry(self, label: str, entry: DatasetEntry) -> Dataset:
        new = Dataset()
        new._entries = dict(self._entries)
        new._add(label, entry)
        return new

    def subset(self, labels: list[str]) -> Dataset:
        new = Dataset()
        for label in labels:
            new._add(label, self[label])
        return new

    def without(self, labels: list[str]) -> Dataset:
        drop = set(labels)
        return self.subset([l for l in self.labels if l not in drop])

    def span(self) -> tuple[Quarter, Quarter]:
        """Union of entry supports (first present to last present value)."""
        if not self._entries:
            raise DataError("empty dataset has no span")
        firsts = [e.series.first_valid() for e in self._entries.values()]
        lasts = [e.series.last_valid() for e in self._entries.values()]
        firsts = [q for q in firsts if q is not None]
        if not firsts:
            raise DataError("all series are entirely missing")
        return min(firsts), max(q for q in lasts if q is not None)

    def coverage(self, q: Quarter) -> float:
        """Fraction of entries with a present value at q."""
        if not self._entries:
            raise DataError("empty dataset has no coverage")
        present = sum(1 for e in self._entries.values() if e.series.has(q))
        return present / len(self._entries)

    def coverage_start(self, threshold: float) -> Quarter:
        """Earliest quarter from which coverage stays at or above `threshold`
        through the end of the panel.
        """
        if not 0.0 < threshold <= 1.0:
            raise ValueError(f"threshold must be in (0, 1], got {threshold}")
        start, end = self.span()
        last_bad = None
        q = end
        while q >= start:
            if self.coverage(q) < threshold:
                last_bad = q
                break
            q = q - 1
        if last_bad is None:
            return start
        if last_bad == end:
            raise CoverageError(f"coverage never reaches {threshold} through the panel end")
        return last_bad + 1

    def filter_by_start(self, cutoff: Quarter) -> Dataset:
        """Entries whose first present (transformed) value is at or before cutoff."""
        keep = []
        for label, entry in self._entries.items():
            first = entry.series.first_valid()
            if first is not None and first <= cutoff:
                keep.append(label)
        return self.subset(keep)

    def summary(self) -> list[tuple[str, str, str, str]]:
        """(label, transform, first_valid, last_valid) per entry, for reports."""
        rows = []
        for label, e in self._entries.items():
            first, last = e.series.first_valid(), e.series.last_valid()
            rows.append((label, e.transform.value,
                         str(first) if first else "", str(last) if last else ""))
        return rows
