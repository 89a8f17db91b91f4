"""Noisy release of bucket averages."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from io import StringIO
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from pattern_release.logger import pr_logger
from pattern_release.noise import LaplaceParams, SeededRng, sample_laplace_array
from pattern_release.series import (
    BinSeries,
    Bucket,
    FloatArray,
    Partition,
    PrivacyBudget,
    validate_partition,
)

pr_log = pr_logger(__name__)

# physiological heart-rate range, beats per minute
HEART_RATE_RANGE = (50.0, 210.0)

CSV_COLUMNS = ["bin_index", "original_absent", "released_value", "bucket_index"]


class ExportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True, eq=False)
class ReleasedSeries:
    """Released value of every bin, with the noisy bucket averages it comes from."""

    values: FloatArray
    bucket_values: FloatArray
    partition: Partition

    def __post_init__(self) -> None:
        if len(self.values) != self.partition.series_len:
            raise ValueError(
                f"Got {len(self.values)} released values for {self.partition.series_len} bins."
            )
        if len(self.bucket_values) != len(self.partition):
            raise ValueError(
                f"Got {len(self.bucket_values)} bucket values for {len(self.partition)} buckets."
            )

    def __len__(self) -> int:
        return len(self.values)


def release(
    s: BinSeries,
    p: Partition,
    budget: PrivacyBudget,
    rng: SeededRng | None,
    zero_noise: bool = False,
    clamp: tuple[float, float] | None = None,
) -> ReleasedSeries:
    """Release the average of every bucket plus independent Laplace noise.

    Every bucket gets its own draw of scale ``alpha / eps2``; buckets are
    disjoint, so the whole step spends ``eps2``.

    Parameters
    ----------
    s : BinSeries
        Original bins.

    p : Partition
        Buckets over ``s``. Must pass :func:`validate_partition`.

    budget : PrivacyBudget
        Provides ``alpha`` and ``eps2``.

    rng : SeededRng or None
        Noise source, drawn once per bucket in bucket order.
        May be ``None`` in zero-noise mode.

    zero_noise : bool, default=False
        Release the exact bucket averages.

    clamp : tuple[float, float], optional
        Clip released values to this range. Post-processing only,
        it does not affect privacy but it does change the errors.
    """
    valid, diagnostics = validate_partition(p, s)
    if not valid:
        raise ValueError(f"Invalid partition: {'; '.join(diagnostics)}")

    starts = p.starts() - 1
    lengths = np.diff(np.append(starts, len(s)))
    means = np.add.reduceat(s.bins, starts) / lengths

    if zero_noise:
        noise = np.zeros(len(p))
    elif rng is None:
        raise ValueError("A random generator is required unless zero_noise is set.")
    else:
        noise = sample_laplace_array(rng, LaplaceParams(scale=budget.alpha / budget.eps2), len(p))

    bucket_values = means + noise
    if clamp is not None:
        bucket_values = np.clip(bucket_values, *clamp)

    return ReleasedSeries(
        values=bucket_values[p.bucket_of_bin()], bucket_values=bucket_values, partition=p
    )


def bucket_means(s: BinSeries, p: Partition) -> ReleasedSeries:
    """Release of the partitioning step alone: exact bucket averages."""
    return release(s, p, budget=PrivacyBudget(1.0, 1.0, 1.0), rng=None, zero_noise=True)


def _to_dict(r: ReleasedSeries) -> dict[str, Any]:
    return {
        "series_len": r.partition.series_len,
        "buckets": [[b.start, b.end] for b in r.partition.buckets],
        "bucket_values": r.bucket_values.tolist(),
        "values": r.values.tolist(),
    }


def export_release(r: ReleasedSeries, fmt: ExportFormat | str = ExportFormat.CSV) -> bytes:
    """Serialize a release.

    CSV has one row per bin with columns
    ``bin_index,original_absent,released_value,bucket_index``;
    ``original_absent`` is always true: original values are never exported.
    JSON mirrors :class:`ReleasedSeries`. Floats keep 17 significant digits.
    """
    fmt = ExportFormat(fmt)
    if fmt is ExportFormat.JSON:
        return (json.dumps(_to_dict(r), indent=2) + "\n").encode()

    df = pd.DataFrame(
        {
            "bin_index": np.arange(1, len(r) + 1),
            "original_absent": True,
            "released_value": r.values,
            "bucket_index": r.partition.bucket_of_bin() + 1,
        },
        columns=CSV_COLUMNS,
    )
    buffer = StringIO()
    df.to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
    return buffer.getvalue().encode()


def load_release(data: bytes | str) -> ReleasedSeries:
    """Read back a JSON export."""
    content = json.loads(data)
    for key in ("series_len", "buckets", "bucket_values", "values"):
        if key not in content:
            raise ValueError(f"Key '{key}' not found in release JSON.")
    partition = Partition(
        buckets=tuple(Bucket(int(start), int(end)) for start, end in content["buckets"]),
        series_len=int(content["series_len"]),
    )
    return ReleasedSeries(
        values=np.array(content["values"], dtype=np.float64),
        bucket_values=np.array(content["bucket_values"], dtype=np.float64),
        partition=partition,
    )


def write_release(
    r: ReleasedSeries, output_file: Path, fmt: ExportFormat | str = ExportFormat.CSV
) -> Path:
    try:
        output_file.parent.mkdir(exist_ok=True, parents=True)
        output_file.write_bytes(export_release(r, fmt))
    except OSError as exc:
        raise OSError(f"Could not write release to '{output_file}': {exc}") from exc
    pr_log.info(f"Release saved to: {output_file}")
    return output_file
