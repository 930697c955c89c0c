"""Exception hierarchy.

Exit-code mapping used by the CLI: ConfigError -> 2, data-shape problems
(DataError and friends) -> 3, numerical failures (EstimationError and
friends) -> 4.
"""

from __future__ import annotations


class CyclecastError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CyclecastError):
    """Bad run configuration (unknown keys, invalid values, missing paths)."""


class DataError(CyclecastError):
    """Malformed or inconsistent input data (ingestion and panel assembly)."""


class InvalidQuarter(DataError):
    """Quarter text or fields outside YYYYQ1..YYYYQ4."""


class TransformError(DataError):
    """A series transformation cannot be applied (e.g. log of a non-positive value)."""


class ProxyGap(DataError):
    """The backfill proxy is missing a quarter inside the extension range."""


class CoverageError(DataError):
    """No quarter satisfies the requested panel coverage threshold."""


class AlignmentError(CyclecastError):
    """Forecast record sets do not share the same (origin, horizon) targets."""


class EstimationError(CyclecastError):
    """Base class for numerical estimation failures."""


class SampleTooShort(EstimationError):
    """Fewer observations than the model requires."""


class RankDeficient(EstimationError):
    """Regressor matrix (possibly after dummy stacking) is not full column rank."""


class NonConvergence(EstimationError):
    """Iterative solver hit its sweep limit before meeting tolerance."""


class DegenerateFit(EstimationError):
    """Residual sum of squares is zero (or negative), e.g. for BIC evaluation."""
