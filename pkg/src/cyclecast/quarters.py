"""Quarterly calendar arithmetic.

Quarters are immutable, totally ordered by (year, quarter), and support
offset arithmetic: ``q + k`` shifts by k quarters and ``q2 - q1`` counts
quarters between two dates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import InvalidQuarter

_QUARTER_RE = re.compile(r"^(\d{4})Q([1-4])$")


@dataclass(frozen=True, order=True)
class Quarter:
    year: int
    quarter: int

    def __post_init__(self) -> None:
        if self.quarter not in (1, 2, 3, 4):
            raise InvalidQuarter(f"quarter must be in 1..4, got {self.quarter}")

    @property
    def index(self) -> int:
        """Serial quarter number (year*4 + quarter-1); the unit of arithmetic."""
        return self.year * 4 + self.quarter - 1

    @classmethod
    def from_index(cls, index: int) -> Quarter:
        return cls(index // 4, index % 4 + 1)

    def __add__(self, k: int) -> Quarter:
        if not isinstance(k, int):
            return NotImplemented
        return Quarter.from_index(self.index + k)

    def __sub__(self, other: Quarter | int):
        if isinstance(other, Quarter):
            return self.index - other.index
        if isinstance(other, int):
            return Quarter.from_index(self.index - other)
        return NotImplemented

    def __str__(self) -> str:
        return f"{self.year}Q{self.quarter}"


def parse_quarter(text: str) -> Quarter:
    """Parse 'YYYYQD' (e.g. '1968Q2'); raises InvalidQuarter on anything else."""
    m = _QUARTER_RE.match(text.strip())
    if m is None:
        raise InvalidQuarter(f"expected YYYYQD with D in 1..4, got {text!r}")
    return Quarter(int(m.group(1)), int(m.group(2)))


def quarter_range(start: Quarter, end: Quarter) -> list[Quarter]:
    """All quarters from start to end inclusive (empty if end < start)."""
    return [Quarter.from_index(i) for i in range(start.index, end.index + 1)]
