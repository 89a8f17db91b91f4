"""Top-level workflows: comparative experiments, timing and the privacy-ratio sweep.

Every trial ``t`` (1-based) uses the seed ``base_seed + t``, both for its
synthetic series and for the noise of every algorithm, so a trial can be
replayed in isolation and all algorithms of a trial see the same uniforms.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Any, Iterable

import numpy as np
import pandas as pd

from pattern_release._utils import progress_bar, read_raw_series
from pattern_release.data.synthetic import generate_synthetic
from pattern_release.data.utils import ExperimentConfig
from pattern_release.logger import pr_logger
from pattern_release.metrics import ground_truth_rapid_changes, metrics_report
from pattern_release.noise import ScaleMode, SeededRng, dp_ratio_grid
from pattern_release.partitioner import (
    PartitionConfig,
    partition_baseline,
    partition_pattern_preserving,
)
from pattern_release.releaser import HEART_RATE_RANGE, ReleasedSeries, bucket_means, release
from pattern_release.series import BinSeries, Partition, aggregate

pr_log = pr_logger(__name__)

PATTERN_PRESERVING = "pattern_preserving"
BASELINE = "baseline"

SUMMARY_COLUMNS = [
    "algorithm",
    "variant",
    "trials",
    "preservation_mean",
    "preservation_sd",
    "abs_err_part_mean",
    "rel_err_part_mean",
    "abs_err_rel_mean",
    "rel_err_rel_mean",
    "partition_ms_median",
    "total_ms_median",
]


@dataclass(frozen=True)
class ExperimentResult:
    """Outputs of :func:`run_experiment`.

    - ``summary``: one row per algorithm variant, trial means.
    - ``trials``: one row per trial and algorithm variant.
    - ``trace``: per-bin original, partition-step and released values of the
      first trial, one block per algorithm variant.
    """

    summary: pd.DataFrame
    trials: pd.DataFrame
    trace: pd.DataFrame


def partition_config(cfg: ExperimentConfig) -> PartitionConfig:
    return PartitionConfig(
        thresholds=cfg.thresholds,
        budget=cfg.budget,
        scale_mode=cfg.scale_mode,
        zero_noise=cfg.zero_noise,
    )


def load_input(cfg: ExperimentConfig) -> BinSeries | None:
    """Load the series of a file-based experiment; ``None`` for synthetic input."""
    if cfg.is_synthetic:
        return None
    return aggregate(read_raw_series(cfg.input), cfg.window)


def _variant(t_d: float) -> str:
    return f"t_d={t_d:g}"


def _run_algorithm(
    cfg: ExperimentConfig, s: BinSeries, seed: int, t_d: float | None
) -> tuple[Partition, ReleasedSeries, float, float]:
    """Partition and release ``s``; ``t_d=None`` runs the pattern-preserving algorithm."""
    rng = SeededRng(seed)
    clamp = HEART_RATE_RANGE if cfg.clamp else None

    start = time.perf_counter()
    if t_d is None:
        partition, _ = partition_pattern_preserving(s, partition_config(cfg), rng)
    else:
        partition = partition_baseline(
            s,
            t_d=t_d,
            t_l=cfg.thresholds.t_l,
            budget=cfg.budget,
            rng=rng,
            zero_noise=cfg.zero_noise,
            scale_mode=cfg.scale_mode,
        )
    partition_done = time.perf_counter()
    released = release(s, partition, cfg.budget, rng, zero_noise=cfg.zero_noise, clamp=clamp)
    release_done = time.perf_counter()

    return partition, released, partition_done - start, release_done - start


def _trace_rows(
    s: BinSeries,
    partition: Partition,
    released: ReleasedSeries,
    algorithm: str,
    variant: str,
) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "algorithm": algorithm,
            "variant": variant,
            "bin_index": np.arange(1, len(s) + 1),
            "original": s.bins,
            "partition_step": bucket_means(s, partition).values,
            "released": released.values,
            "bucket_index": partition.bucket_of_bin() + 1,
        }
    )


def summarize(trials: pd.DataFrame) -> pd.DataFrame:
    """Reduce per-trial rows to one row per algorithm variant, in order of appearance."""
    grouped = trials.groupby(["algorithm", "variant"], sort=False)
    summary = grouped.agg(
        trials=("trial", "count"),
        preservation_mean=("preservation", "mean"),
        preservation_sd=("preservation", lambda x: x.std(ddof=0)),
        abs_err_part_mean=("abs_err_part", "mean"),
        rel_err_part_mean=("rel_err_part", "mean"),
        abs_err_rel_mean=("abs_err_rel", "mean"),
        rel_err_rel_mean=("rel_err_rel", "mean"),
        partition_ms_median=("partition_ms", "median"),
        total_ms_median=("total_ms", "median"),
    ).reset_index()
    return summary[SUMMARY_COLUMNS]


def run_experiment(cfg: ExperimentConfig, series: BinSeries | None = None) -> ExperimentResult:
    """Compare the pattern-preserving algorithm against every baseline variant.

    Parameters
    ----------
    cfg : ExperimentConfig

    series : BinSeries, optional
        Series to use for every trial. Defaults to the configured input:
        a fresh synthetic series per trial, or the input file.

    Returns
    -------
    ExperimentResult
    """
    if series is None:
        series = load_input(cfg)

    algorithms: list[tuple[str, str, float | None]] = [
        (PATTERN_PRESERVING, _variant(cfg.thresholds.t_d), None)
    ]
    algorithms.extend((BASELINE, _variant(t_d), t_d) for t_d in cfg.baseline_t_d_variants)

    pr_log.info(
        f"Running {cfg.trials} trials of {len(algorithms)} algorithm variants "
        f"(base seed {cfg.base_seed}, zero noise: {cfg.zero_noise})."
    )

    rows: list[dict[str, Any]] = []
    traces: list[pd.DataFrame] = []
    with progress_bar(text="Running trials") as progress:
        task = progress.add_task(description="trials", total=cfg.trials)

        for trial in range(1, cfg.trials + 1):
            seed = cfg.base_seed + trial
            if series is None:
                s, _ = generate_synthetic(replace(cfg.synthetic, seed=seed))
            else:
                s = series

            gt = ground_truth_rapid_changes(s, cfg.thresholds.t_r)
            if not gt:
                pr_log.debug(f"Trial {trial}: no rapid change in the series.")

            for algorithm, variant, t_d in algorithms:
                partition, released, partition_time, total_time = _run_algorithm(
                    cfg, s, seed, t_d
                )
                report = metrics_report(
                    s,
                    partition,
                    released,
                    gt,
                    delta_floor=cfg.delta_floor,
                    strict=cfg.strict_detection,
                )
                rows.append(
                    {
                        "trial": trial,
                        "seed": seed,
                        "algorithm": algorithm,
                        "variant": variant,
                        "rapid_changes": len(gt),
                        "buckets": len(partition),
                        "preservation": report.preservation_pct,
                        "abs_err_part": report.abs_err_partition,
                        "rel_err_part": report.rel_err_partition,
                        "abs_err_rel": report.abs_err_release,
                        "rel_err_rel": report.rel_err_release,
                        "partition_ms": partition_time * 1e3 if cfg.timing else np.nan,
                        "total_ms": total_time * 1e3 if cfg.timing else np.nan,
                    }
                )
                if trial == 1:
                    traces.append(_trace_rows(s, partition, released, algorithm, variant))

            progress.update(task, advance=1)

    trials = pd.DataFrame(rows)
    trials["preservation"] = trials["preservation"].astype(float)
    summary = summarize(trials)
    for row in summary.itertuples():
        pr_log.info(
            f"  {row.algorithm} ({row.variant}): "
            f"preservation {row.preservation_mean:.2f} %, "
            f"partition abs error {row.abs_err_part_mean:.3f}"
        )

    return ExperimentResult(summary=summary, trials=trials, trace=pd.concat(traces))


def time_partition(
    cfg: PartitionConfig, s: BinSeries, repeats: int = 5, seed: int = 0
) -> tuple[float, float]:
    """Median wall-clock seconds of (partition only, partition + release).

    Every repeat replays the same seed, so the same work is timed.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be at least 1, got {repeats}.")

    partition_times = []
    total_times = []
    for _ in range(repeats):
        rng = SeededRng(seed)
        start = time.perf_counter()
        partition, _ = partition_pattern_preserving(s, cfg, rng)
        partition_done = time.perf_counter()
        release(s, partition, cfg.budget, rng, zero_noise=cfg.zero_noise)
        release_done = time.perf_counter()
        partition_times.append(partition_done - start)
        total_times.append(release_done - start)

    return float(np.median(partition_times)), float(np.median(total_times))


def verify_dp(
    alpha: float,
    eps1_values: Iterable[float] = (0.1, 0.5, 1.0, 2.0),
    scale_mode: ScaleMode | str = ScaleMode.PROOF_ALPHA,
) -> tuple[bool, pd.DataFrame]:
    """Run the privacy-ratio sweep and tell whether every grid point is within bounds."""
    report = dp_ratio_grid(alpha, eps1_values=eps1_values, scale_mode=scale_mode)
    passed = bool(report["bound_ok"].all())
    if passed:
        pr_log.info(f"Privacy ratio within e^eps1 on all {len(report)} grid points.")
    else:
        failing = report[~report["bound_ok"]]
        pr_log.warning(
            f"Privacy ratio above e^eps1 on {len(failing)} of {len(report)} grid points "
            f"(worst ratio {failing['ratio_decrease'].max():.4f} "
            f"for bound {failing['bound'].iloc[0]:.4f})."
        )
    return passed, report
