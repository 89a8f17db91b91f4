"""Evaluation of a release: pattern preservation and errors."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any, Iterator

import numpy as np

from pattern_release.releaser import ReleasedSeries, bucket_means
from pattern_release.series import BinSeries, Partition


@dataclass(frozen=True)
class RapidChangeSet:
    """1-based indices ``i`` (``i >= 2``) where ``|x_i - x_(i-1)|`` exceeds ``t_r``."""

    indices: frozenset[int]

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, index: object) -> bool:
        return index in self.indices

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.indices))


@dataclass(frozen=True)
class MetricsReport:
    """Metrics of one algorithm on one trial.

    ``preservation_pct`` is ``None`` when the series has no rapid change.
    Times are in seconds.
    """

    preservation_pct: float | None
    abs_err_partition: float
    rel_err_partition: float
    abs_err_release: float
    rel_err_release: float
    partition_time: float = float("nan")
    total_time: float = float("nan")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def ground_truth_rapid_changes(s: BinSeries, t_r: float) -> RapidChangeSet:
    """Return every index whose jump from the previous bin is strictly above ``t_r``.

    Uses the threshold before any noise, so the result depends on the data only.
    """
    if t_r <= 0:
        raise ValueError(f"t_r must be positive, got {t_r}.")
    jumps = np.flatnonzero(np.abs(np.diff(s.bins)) > t_r) + 2
    return RapidChangeSet(indices=frozenset(int(i) for i in jumps))


def preservation_pct(gt: RapidChangeSet, p: Partition, strict: bool = False) -> float | None:
    """Percentage of rapid changes that land on a bucket boundary.

    A rapid change at ``i`` is detected when bins ``i - 1`` and ``i`` are in
    different buckets. With ``strict=True`` both must also be single-bin
    buckets.
    """
    if not gt:
        return None

    if strict:
        lengths = np.array([b.length for b in p.buckets])[p.bucket_of_bin()]
        detected = sum(1 for i in gt if lengths[i - 2] == 1 and lengths[i - 1] == 1)
    else:
        starts = set(p.starts().tolist())
        detected = sum(1 for i in gt if i in starts)

    return 100 * detected / len(gt)


def error_metrics(
    s: BinSeries, r: ReleasedSeries, delta_floor: float = 1.0
) -> tuple[float, float]:
    """Mean absolute error and mean relative error of ``r`` against ``s``.

    The relative error divides by ``max(|x_i|, delta_floor)``.
    """
    if len(s) != len(r):
        raise ValueError(f"Length mismatch: {len(s)} bins but {len(r)} released values.")
    if delta_floor <= 0:
        raise ValueError(f"delta_floor must be positive, got {delta_floor}.")
    errors = np.abs(s.bins - r.values)
    relative = errors / np.maximum(np.abs(s.bins), delta_floor)
    return float(errors.mean()), float(relative.mean())


def metrics_report(
    s: BinSeries,
    p: Partition,
    released: ReleasedSeries,
    gt: RapidChangeSet,
    delta_floor: float = 1.0,
    strict: bool = False,
    partition_time: float = float("nan"),
    total_time: float = float("nan"),
) -> MetricsReport:
    """Compute every metric of one partition and its release."""
    abs_err_partition, rel_err_partition = error_metrics(s, bucket_means(s, p), delta_floor)
    abs_err_release, rel_err_release = error_metrics(s, released, delta_floor)
    return MetricsReport(
        preservation_pct=preservation_pct(gt, p, strict=strict),
        abs_err_partition=abs_err_partition,
        rel_err_partition=rel_err_partition,
        abs_err_release=abs_err_release,
        rel_err_release=rel_err_release,
        partition_time=partition_time,
        total_time=total_time,
    )
