import numpy as np
import pytest

from cyclecast.dataset import Dataset, DatasetEntry
from cyclecast.errors import CoverageError, DataError
from cyclecast.quarters import Quarter
from cyclecast.series import Series, TransformCode

Q = Quarter
START = Q(1960, 1)


def make_panel(n_series=10, n_quarters=40, late_starts=None):
    """Balanced panel except for series delayed by late_starts[label] quarters."""
    late_starts = late_starts or {}
    entries = {}
    for i in range(n_series):
        label = f"s{i}"
        delay = late_starts.get(label, 0)
        vals = np.concatenate([np.full(delay, np.nan), np.ones(n_quarters - delay)])
        entries[label] = DatasetEntry(Series(START, vals), TransformCode.LEVEL)
    return Dataset(entries)


class TestCoverage:
    def test_balanced_panel_full_coverage(self):
        d = make_panel()
        assert d.coverage(START) == 1.0
        assert d.coverage_start(0.95) == START

    def test_one_late_series(self):
        d = make_panel(late_starts={"s3": 8})
        assert d.coverage(START) == 0.9
        assert d.coverage_start(0.95) == START + 8
        assert d.coverage_start(0.9) == START

    def test_threshold_one_returns_latest_start(self):
        d = make_panel(late_starts={"s1": 3, "s7": 11})
        assert d.coverage_start(1.0) == START + 11

    def test_monotone_in_threshold(self):
        d = make_panel(late_starts={"s1": 3, "s2": 6, "s7": 11})
        results = [d.coverage_start(t) for t in (0.75, 0.85, 0.95, 1.0)]
        for a, b in zip(results, results[1:]):
            assert a <= b

    def test_unreachable_threshold(self):
        entries = {
            "short": DatasetEntry(
                Series(START, np.concatenate([np.ones(5), np.full(5, np.nan)])),
                TransformCode.LEVEL,
            ),
            "full": DatasetEntry(Series(START, np.ones(10)), TransformCode.LEVEL),
        }
        d = Dataset(entries)
        with pytest.raises(CoverageError):
            d.coverage_start(1.0)


class TestFilterByStart:
    def test_identity_when_all_early(self):
        d = make_panel()
        assert d.filter_by_start(START).labels == d.labels

    def test_empty_when_all_late(self):
        d = make_panel(late_starts={f"s{i}": 4 for i in range(10)})
        assert len(d.filter_by_start(START)) == 0

    def test_cutoff_boundary_inclusive(self):
        d = make_panel(late_starts={"s0": 4, "s1": 5})
        kept = d.filter_by_start(START + 4)
        assert "s0" in kept and "s1" not in kept
        assert len(kept) == 9


class TestDatasetBasics:
    def test_duplicate_label_rejected(self):
        d = make_panel(n_series=2)
        with pytest.raises(DataError):
            d.with_entry("s0", d["s1"])

    def test_interior_gap_rejected_at_construction(self):
        bad = Series(START, [1.0, np.nan, 1.0])
        with pytest.raises(DataError):
            Dataset({"bad": DatasetEntry(bad, TransformCode.LEVEL)})

    def test_subset_preserves_order(self):
        d = make_panel(n_series=4)
        sub = d.subset(["s2", "s0"])
        assert sub.labels == ["s2", "s0"]

    def test_span(self):
        d = make_panel(n_series=3, n_quarters=8, late_starts={"s0": 2})
        assert d.span() == (START, START + 7)

    def test_summary_lists_valid_range(self):
        d = make_panel(n_series=2, n_quarters=8, late_starts={"s1": 3})
        rows = dict((r[0], r) for r in d.summary())
        assert rows["s1"][2] == str(START + 3)
        assert rows["s1"][3] == str(START + 7)
