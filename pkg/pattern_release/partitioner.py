"""Private partitioning of bins into buckets.

Two greedy single-scan partitioners share one growth rule: a bin joins the
open bucket while the bucket spread stays within the noisy ``t_d`` and the
bucket is shorter than ``t_l``.

The pattern-preserving partitioner adds a rapid-change rule checked on
every adjacent pair: when ``|x_(i-1) - x_i|`` exceeds the noisy ``t_r``,
both bins end up in single-bin buckets, so the jump survives averaging.
If ``x_(i-1)`` closed a full bucket just before, it is popped back out of
that bucket (a backtrack); at most one bin of the last closed bucket is
ever touched.

Tie-breaking: ``|delta| == t_r_hat`` does not isolate, ``spread == t_d_hat``
still grows the bucket. Negative noisy thresholds are used as they are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from pattern_release.logger import pr_logger
from pattern_release.noise import (
    LaplaceParams,
    RandomizedThresholds,
    ScaleMode,
    SeededRng,
    randomize_thresholds,
    sample_laplace,
    threshold_noise_scale,
)
from pattern_release.series import BinSeries, Partition, PrivacyBudget, Thresholds

pr_log = pr_logger(__name__)


@dataclass(frozen=True)
class PartitionConfig:
    thresholds: Thresholds
    budget: PrivacyBudget
    scale_mode: ScaleMode = ScaleMode.PROOF_ALPHA
    zero_noise: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale_mode", ScaleMode(self.scale_mode))


@dataclass(slots=True)
class ScanState:
    """Mutable state of one scan.

    The open bucket is stored as its first bin (1-based) and its length;
    it always ends at the bin preceding the one being scanned.
    ``emitted`` holds the closed buckets as 1-based ``(start, end)`` pairs.
    """

    open_start: int = 0
    open_len: int = 0
    previous_value: float | None = None
    cur_min: float = math.inf
    cur_max: float = -math.inf
    emitted: list[tuple[int, int]] = field(default_factory=list)
    bin_visits: int = 0
    backtracks: int = 0

    def start(self, i: int, x: float) -> None:
        self.open_start = i
        self.open_len = 1
        self.cur_min = self.cur_max = x

    def close(self) -> None:
        if self.open_len:
            self.emitted.append((self.open_start, self.open_start + self.open_len - 1))
            self.open_len = 0

    def grow(self, i: int, x: float, t_d_hat: float, t_l: int) -> None:
        if self.open_len == 0:
            self.start(i, x)
        elif max(self.cur_max, x) - min(self.cur_min, x) <= t_d_hat and self.open_len < t_l:
            self.open_len += 1
            self.cur_min = min(self.cur_min, x)
            self.cur_max = max(self.cur_max, x)
        else:
            self.close()
            self.start(i, x)
        # a full bucket cannot grow: close it now
        if self.open_len >= t_l:
            self.close()

    def isolate_previous(self, i: int) -> None:
        """Put bin ``i - 1`` in a single-bin bucket."""
        if self.open_len > 1:
            self.emitted.append((self.open_start, i - 2))
            self.emitted.append((i - 1, i - 1))
            self.open_len = 0
        elif self.open_len == 1:
            self.close()
        else:
            start, end = self.emitted[-1]
            if end > start:
                self.emitted[-1] = (start, end - 1)
                self.emitted.append((end, end))
                self.backtracks += 1
                self.bin_visits += 1

    def isolate(self, i: int) -> None:
        self.isolate_previous(i)
        self.emitted.append((i, i))


def _scan(
    values: list[float], t_d_hat: float, t_l: int, t_r_hat: float | None = None
) -> ScanState:
    state = ScanState()
    for i, x in enumerate(values, start=1):
        state.bin_visits += 1
        previous = state.previous_value
        if t_r_hat is not None and previous is not None and abs(previous - x) > t_r_hat:
            state.isolate(i)
        else:
            state.grow(i, x, t_d_hat, t_l)
        state.previous_value = x
    state.close()
    return state


def partition_pattern_preserving(
    s: BinSeries, cfg: PartitionConfig, rng: SeededRng
) -> tuple[Partition, RandomizedThresholds]:
    """Partition ``s`` so that rapid changes end up on bucket boundaries.

    The noisy thresholds are drawn once, before the scan.

    Parameters
    ----------
    s : BinSeries
        Bins to partition.

    cfg : PartitionConfig
        Thresholds, budget, threshold-noise scale and zero-noise switch.

    rng : SeededRng
        Source of the threshold noise. Untouched in zero-noise mode.

    Returns
    -------
    tuple[Partition, RandomizedThresholds]
        The buckets and the thresholds that produced them.
    """
    realized = randomize_thresholds(
        rng, cfg.thresholds, cfg.budget, scale_mode=cfg.scale_mode, zero_noise=cfg.zero_noise
    )
    state = _scan(
        s.bins.tolist(),
        t_d_hat=realized.t_d_hat,
        t_l=cfg.thresholds.t_l,
        t_r_hat=realized.t_r_hat,
    )
    pr_log.debug(
        f"Pattern-preserving partition: {len(state.emitted)} buckets over {len(s)} bins, "
        f"{state.backtracks} backtracks."
    )
    return Partition.from_ranges(state.emitted, s), realized


def partition_baseline(
    s: BinSeries,
    t_d: float,
    t_l: int,
    budget: PrivacyBudget,
    rng: SeededRng,
    zero_noise: bool = False,
    scale_mode: ScaleMode | str = ScaleMode.PROOF_ALPHA,
) -> Partition:
    """Greedy partition with the spread and length rules only.

    Rapid changes get no special treatment: a jump smaller than the noisy
    ``t_d`` is averaged away inside its bucket.
    """
    if not math.isfinite(t_d) or t_d <= 0:
        raise ValueError(f"Threshold 't_d' must be a positive real, got {t_d}.")
    if t_l < 1:
        raise ValueError(f"Threshold 't_l' must be at least 1, got {t_l}.")
    t_d_hat = t_d
    if not zero_noise:
        t_d_hat += sample_laplace(
            rng, LaplaceParams(scale=threshold_noise_scale(budget, scale_mode))
        )
    state = _scan(s.bins.tolist(), t_d_hat=t_d_hat, t_l=t_l)
    pr_log.debug(
        f"Baseline partition (t_d={t_d}, t_d_hat={t_d_hat:.4f}): "
        f"{len(state.emitted)} buckets over {len(s)} bins."
    )
    return Partition.from_ranges(state.emitted, s)


def scan_cost(
    s: BinSeries, cfg: PartitionConfig, rng: SeededRng | None = None
) -> tuple[int, int]:
    """Count bin visits and backtracks of one pattern-preserving scan.

    Without ``rng`` the configured thresholds are used without noise.

    Returns
    -------
    tuple[int, int]
        ``(bin_visits, backtracks)``; ``bin_visits`` is at most ``2 * len(s)``.
    """
    if rng is None or cfg.zero_noise:
        t_d_hat, t_r_hat = cfg.thresholds.t_d, cfg.thresholds.t_r
    else:
        realized = randomize_thresholds(rng, cfg.thresholds, cfg.budget, cfg.scale_mode)
        t_d_hat, t_r_hat = realized.t_d_hat, realized.t_r_hat
    state = _scan(s.bins.tolist(), t_d_hat=t_d_hat, t_l=cfg.thresholds.t_l, t_r_hat=t_r_hat)
    return state.bin_visits, state.backtracks
