"""Synthetic heart-rate-like bin series with injected rapid changes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pattern_release.noise import SeededRng
from pattern_release.series import BinSeries


@dataclass(frozen=True)
class SyntheticSpec:
    """Gaussian random walk with level shifts.

    Parameters
    ----------
    length : int
        Number of bins.

    base_level : float, default=75
        Starting value.

    walk_step_sd : float, default=2
        Standard deviation of the step between two bins.

    jump_count : int, default=0
        Number of level shifts. Two shifts are never adjacent.

    jump_magnitude_range : tuple[float, float], default=(15, 30)
        Shift magnitudes are uniform on ``(lo, hi]``. ``hi`` is at most half
        the width of ``value_clip``.

    value_clip : tuple[float, float], default=(50, 210)
        The walk stays in this range.

    seed : int, default=0
    """

    length: int
    base_level: float = 75.0
    walk_step_sd: float = 2.0
    jump_count: int = 0
    jump_magnitude_range: tuple[float, float] = (15.0, 30.0)
    value_clip: tuple[float, float] = (50.0, 210.0)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError(f"Synthetic length must be at least 1, got {self.length}.")
        if self.walk_step_sd < 0:
            raise ValueError(f"walk_step_sd must be non-negative, got {self.walk_step_sd}.")
        if self.jump_count < 0:
            raise ValueError(f"jump_count must be non-negative, got {self.jump_count}.")
        clip_lo, clip_hi = self.value_clip
        if clip_lo >= clip_hi:
            raise ValueError(f"Invalid value_clip {self.value_clip}: lower bound must be smaller.")
        lo, hi = self.jump_magnitude_range
        # a jump of at most half the range always fits one way or the other
        if not 0 <= lo < hi <= (clip_hi - clip_lo) / 2:
            raise ValueError(
                f"Invalid jump_magnitude_range {self.jump_magnitude_range}: "
                f"need 0 <= lo < hi <= {(clip_hi - clip_lo) / 2}."
            )
        if self.jump_count and 2 * self.jump_count - 1 > self.length - 1:
            raise ValueError(
                f"Cannot place {self.jump_count} non-adjacent jumps "
                f"in a series of {self.length} bins."
            )


def generate_synthetic(spec: SyntheticSpec) -> tuple[BinSeries, list[int]]:
    """Generate a series and the 1-based indices of its injected jumps.

    A jump at index ``i`` moves ``x_i`` away from ``x_(i-1)`` by the whole
    magnitude, up or down, whichever keeps the value inside ``value_clip``.
    """
    gen = SeededRng(spec.seed).generator
    n = spec.length
    clip_lo, clip_hi = spec.value_clip
    lo, hi = spec.jump_magnitude_range

    steps = gen.normal(0.0, spec.walk_step_sd, n)

    k = spec.jump_count
    if k:
        # k sorted picks among n - k slots, spread apart so no two are adjacent
        picks = np.sort(gen.choice(n - k, size=k, replace=False)) + np.arange(k)
        positions = (picks + 1).tolist()
        magnitudes = (hi - gen.random(k) * (hi - lo)).tolist()
        signs = gen.choice([-1.0, 1.0], size=k).tolist()
    else:
        positions, magnitudes, signs = [], [], []
    jumps = dict(zip(positions, zip(magnitudes, signs)))

    values = [min(max(spec.base_level, clip_lo), clip_hi)]
    for i in range(1, n):
        previous = values[-1]
        if i in jumps:
            magnitude, sign = jumps[i]
            if not clip_lo <= previous + sign * magnitude <= clip_hi:
                sign = -sign
            value = previous + sign * magnitude
        else:
            value = previous + steps[i]
        values.append(min(max(value, clip_lo), clip_hi))

    return BinSeries(bins=np.array(values)), [p + 1 for p in positions]
