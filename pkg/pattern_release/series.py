"""Core domain types and the raw-record to bin aggregation step.

Bin and bucket indices are 1-based in everything a user sees
(error messages, diagnostics, exports); arrays are 0-based internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import numpy.typing as npt

from pattern_release.logger import pr_logger

pr_log = pr_logger(__name__)

FloatArray = npt.NDArray[np.float64]


def _readonly(values: Sequence[float] | FloatArray) -> FloatArray:
    array = np.array(values, dtype=np.float64)
    array.flags.writeable = False
    return array


def _first_non_finite(values: FloatArray) -> int | None:
    bad = np.flatnonzero(~np.isfinite(values))
    return int(bad[0]) + 1 if bad.size else None


@dataclass(frozen=True, eq=False)
class RawSeries:
    """Per-record measurements, for example heart rate for each minute.

    Records are assumed dense: one value per time step, no missing minutes.
    """

    values: FloatArray
    timestamps: npt.NDArray[np.int64] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _readonly(self.values))
        if (index := _first_non_finite(self.values)) is not None:
            raise ValueError(f"Non-finite raw value at record {index}.")
        if self.timestamps is None:
            return
        timestamps = np.array(self.timestamps, dtype=np.int64)
        timestamps.flags.writeable = False
        if len(timestamps) != len(self.values):
            raise ValueError(
                f"Got {len(timestamps)} timestamps for {len(self.values)} values: "
                "lengths must match."
            )
        if np.any(np.diff(timestamps) < 0):
            position = int(np.flatnonzero(np.diff(timestamps) < 0)[0]) + 2
            raise ValueError(f"Timestamps must be non-decreasing: decrease at record {position}.")
        object.__setattr__(self, "timestamps", timestamps)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class BinSeries:
    """Ordered aggregate bins x_1..x_n."""

    bins: FloatArray
    bin_width: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "bins", _readonly(self.bins))
        if self.bins.ndim != 1 or self.bins.size == 0:
            raise ValueError("Cannot build a bin series from an empty series.")
        if (index := _first_non_finite(self.bins)) is not None:
            raise ValueError(f"Non-finite value at bin {index}.")
        if self.bin_width < 1:
            raise ValueError(f"bin_width must be a positive integer, got {self.bin_width}.")

    def __len__(self) -> int:
        return len(self.bins)

    def slice(self, start: int, end: int) -> FloatArray:
        """Return bins ``start..end`` (1-based, inclusive)."""
        return self.bins[start - 1 : end]


@dataclass(frozen=True)
class Thresholds:
    """Partitioning thresholds.

    Parameters
    ----------
    t_d : float
        Maximum spread (max - min) of the values inside one bucket.

    t_l : int
        Maximum number of bins in one bucket. Never randomized.

    t_r : float
        Maximum jump between two adjacent bins before both get isolated.
        Normally smaller than ``t_d``.
    """

    t_d: float
    t_l: int
    t_r: float

    def __post_init__(self) -> None:
        for name in ("t_d", "t_r"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"Threshold '{name}' must be a positive real, got {value}.")
        if isinstance(self.t_l, bool) or not isinstance(self.t_l, (int, np.integer)):
            raise TypeError(f"Threshold 't_l' must be an integer, got {self.t_l!r}.")
        if self.t_l < 1:
            raise ValueError(f"Threshold 't_l' must be at least 1, got {self.t_l}.")
        if self.t_r >= self.t_d:
            pr_log.warning(
                f"t_r={self.t_r} is not smaller than t_d={self.t_d}: "
                "rapid changes will mostly be caught by the spread rule."
            )


@dataclass(frozen=True)
class PrivacyBudget:
    """Budget for the two randomized steps.

    ``eps1`` pays for the noisy thresholds of the partitioning,
    ``eps2`` for the noisy bucket averages, ``alpha`` is the largest
    change of a single bin between neighboring databases.
    """

    eps1: float
    eps2: float
    alpha: float

    def __post_init__(self) -> None:
        for name in ("eps1", "eps2", "alpha"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"'{name}' must be a positive real, got {value}.")

    @property
    def total(self) -> float:
        return total_epsilon(self)


@dataclass(frozen=True)
class Bucket:
    """Contiguous run of bins ``start..end`` (1-based, inclusive).

    The index range is authoritative. ``values`` is a view of the covered
    bins kept for convenience; it is ``None`` for partitions read back from
    an export, which never carries original values.
    """

    start: int
    end: int
    values: tuple[float, ...] | None = field(default=None, compare=False)

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def spread(self) -> float:
        if not self.values:
            raise ValueError(f"Bucket {self.start}..{self.end} carries no values.")
        return max(self.values) - min(self.values)

    def __str__(self) -> str:
        return f"[{self.start}..{self.end}]"


@dataclass(frozen=True)
class Partition:
    """Ordered buckets meant to cover bins ``1..series_len`` exactly once.

    Nothing is checked at construction; use :func:`validate_partition`.
    """

    buckets: tuple[Bucket, ...]
    series_len: int

    @classmethod
    def from_ranges(
        cls, ranges: Sequence[tuple[int, int]], series: BinSeries | None = None
    ) -> Partition:
        """Build a partition from 1-based ``(start, end)`` pairs.

        When ``series`` is given, each bucket gets its value view and
        ``series_len`` is taken from it; otherwise ``series_len`` is the
        last ``end``.
        """
        if series is None:
            buckets = tuple(Bucket(start, end) for start, end in ranges)
            series_len = ranges[-1][1] if ranges else 0
        else:
            values = series.bins.tolist()
            buckets = tuple(
                Bucket(start, end, tuple(values[start - 1 : end])) for start, end in ranges
            )
            series_len = len(series)
        return cls(buckets=buckets, series_len=series_len)

    def __len__(self) -> int:
        return len(self.buckets)

    def ranges(self) -> list[tuple[int, int]]:
        return [(b.start, b.end) for b in self.buckets]

    def bucket_of_bin(self) -> npt.NDArray[np.int64]:
        """Return, for every bin, the 0-based position of its bucket."""
        lengths = np.array([b.length for b in self.buckets], dtype=np.int64)
        return np.repeat(np.arange(len(self.buckets), dtype=np.int64), lengths)

    def starts(self) -> npt.NDArray[np.int64]:
        return np.array([b.start for b in self.buckets], dtype=np.int64)

    def single_bin_count(self) -> int:
        return sum(1 for b in self.buckets if b.length == 1)


def aggregate(raw: RawSeries, window: int) -> BinSeries:
    """Average consecutive windows of ``window`` raw records into bins.

    A trailing partial window becomes one last bin averaging what remains.

    Parameters
    ----------
    raw : RawSeries
        Dense per-record measurements.

    window : int
        Number of records per bin.

    Returns
    -------
    BinSeries
        ``ceil(len(raw) / window)`` bins.
    """
    if window < 1:
        raise ValueError(f"window must be a positive integer, got {window}.")
    if len(raw) == 0:
        raise ValueError("Cannot aggregate an empty series.")
    starts = np.arange(0, len(raw), window)
    sums = np.add.reduceat(raw.values, starts)
    counts = np.minimum(window, len(raw) - starts)
    return BinSeries(bins=sums / counts, bin_width=window)


def validate_partition(p: Partition, s: BinSeries) -> tuple[bool, list[str]]:
    """Check ``p`` against the coverage, contiguity and value-view invariants.

    Returns
    -------
    tuple[bool, list[str]]
        Whether ``p`` is valid and a message for each violated invariant.
    """
    diagnostics: list[str] = []
    n = len(s)

    if p.series_len != n:
        diagnostics.append(f"partition declares {p.series_len} bins, series has {n}")

    if not p.buckets:
        diagnostics.append("coverage gap at bin 1")
        return False, diagnostics

    values = s.bins.tolist()
    expected_start = 1
    for index, bucket in enumerate(p.buckets, start=1):
        if bucket.start > bucket.end:
            diagnostics.append(
                f"bucket {index} is empty or reversed: {bucket.start} > {bucket.end}"
            )
            continue
        if bucket.start < expected_start:
            diagnostics.append(f"overlap at bin {bucket.start} (bucket {index})")
        elif bucket.start > expected_start:
            diagnostics.append(f"coverage gap at bin {expected_start} (before bucket {index})")
        if bucket.start < 1 or bucket.end > n:
            diagnostics.append(f"bucket {index} {bucket} lies outside bins 1..{n}")
        elif bucket.values is not None and list(bucket.values) != values[
            bucket.start - 1 : bucket.end
        ]:
            diagnostics.append(f"bucket {index} values do not match bins {bucket}")
        expected_start = max(expected_start, bucket.end + 1)

    if expected_start <= n:
        diagnostics.append(f"coverage gap at bin {expected_start} (after last bucket)")

    return not diagnostics, diagnostics


def total_epsilon(b: PrivacyBudget) -> float:
    """Budget of the whole release: partitioning and release compose sequentially."""
    return b.eps1 + b.eps2
