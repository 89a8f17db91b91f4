from __future__ import annotations

import argparse
import os
from pathlib import Path
from typing import TYPE_CHECKING, Any

import pandas as pd

from pattern_release._parsers import SEED_ENV_VAR
from pattern_release.logger import pr_logger
from pattern_release.series import BinSeries, Partition, PrivacyBudget, Thresholds

if TYPE_CHECKING:
    from pattern_release.noise import SeededRng
    from pattern_release.partitioner import PartitionConfig

pr_log = pr_logger(__name__)


def _get_seed_from_args(args: argparse.Namespace) -> int | None:
    """Return ``--seed``, else the seed environment variable, else None."""
    if args.seed is not None:
        return int(args.seed)
    from_env = os.environ.get(SEED_ENV_VAR)
    if from_env is None or from_env.strip() == "":
        return None
    try:
        return int(from_env)
    except ValueError as exc:
        raise ValueError(
            f"Environment variable {SEED_ENV_VAR} must be an integer, got '{from_env}'."
        ) from exc


def _get_series_from_args(args: argparse.Namespace) -> BinSeries:
    from pattern_release._utils import read_raw_series
    from pattern_release.series import aggregate

    input_file = Path(args.input[0]).resolve()
    raw = read_raw_series(input_file)
    series = aggregate(raw, args.window)
    pr_log.info(f"Read {len(raw)} records from '{input_file}': {len(series)} bins.")
    return series


def _get_budget_from_args(args: argparse.Namespace) -> PrivacyBudget:
    return PrivacyBudget(eps1=args.eps1, eps2=args.eps2, alpha=args.alpha)


def _get_partition_config_from_args(args: argparse.Namespace) -> PartitionConfig:
    from pattern_release.partitioner import PartitionConfig

    return PartitionConfig(
        thresholds=Thresholds(t_d=args.t_d, t_l=args.t_l, t_r=args.t_r),
        budget=_get_budget_from_args(args),
        scale_mode=args.scale_mode,
        zero_noise=args.zero_noise,
    )


def _partition_from_args(
    args: argparse.Namespace, series: BinSeries, rng: SeededRng
) -> tuple[Partition, dict[str, Any]]:
    """Partition ``series`` with the algorithm picked on the command line.

    Also returns a description of the run: algorithm, seed, thresholds,
    realized noisy thresholds and scan cost.
    """
    from pattern_release.main import BASELINE, PATTERN_PRESERVING
    from pattern_release.noise import SeededRng
    from pattern_release.partitioner import (
        partition_baseline,
        partition_pattern_preserving,
        scan_cost,
    )

    cfg = _get_partition_config_from_args(args)
    seed = rng.seed
    description: dict[str, Any] = {
        "algorithm": BASELINE if args.baseline else PATTERN_PRESERVING,
        "seed": seed,
        "zero_noise": cfg.zero_noise,
        "scale_mode": cfg.scale_mode.value,
        "thresholds": {"t_d": args.t_d, "t_l": args.t_l, "t_r": args.t_r},
    }

    if args.baseline:
        partition = partition_baseline(
            series,
            t_d=args.t_d,
            t_l=args.t_l,
            budget=cfg.budget,
            rng=rng,
            zero_noise=cfg.zero_noise,
            scale_mode=cfg.scale_mode,
        )
        description["realized"] = None
    else:
        partition, realized = partition_pattern_preserving(series, cfg, rng)
        description["realized"] = {
            "t_d_hat": realized.t_d_hat,
            "t_r_hat": realized.t_r_hat,
            "y": realized.y,
            "y_prime": realized.y_prime,
        }
        # replaying the seed redraws the same thresholds
        bin_visits, backtracks = scan_cost(series, cfg, SeededRng(seed))
        description["bin_visits"] = bin_visits
        description["backtracks"] = backtracks

    return partition, description


def _execute_partition(args: argparse.Namespace) -> Path:
    from pattern_release._utils import write_json
    from pattern_release.noise import SeededRng

    seed = _get_seed_from_args(args) or 0
    series = _get_series_from_args(args)
    partition, description = _partition_from_args(args, series, SeededRng(seed))

    content = {
        **description,
        "series_len": partition.series_len,
        "buckets": [list(r) for r in partition.ranges()],
        "epsilon": args.eps1,
    }
    pr_log.info(
        f"{len(partition)} buckets over {len(series)} bins, "
        f"{partition.single_bin_count()} single-bin buckets; epsilon spent: {args.eps1:g}."
    )
    return write_json(content, Path(args.output[0]).resolve(), what="Partition")


def _execute_release(args: argparse.Namespace) -> Path:
    from pattern_release.noise import SeededRng
    from pattern_release.releaser import HEART_RATE_RANGE, release, write_release

    seed = _get_seed_from_args(args) or 0
    series = _get_series_from_args(args)
    # partitioning and release share one stream
    rng = SeededRng(seed)
    partition, _ = _partition_from_args(args, series, rng)

    budget = _get_budget_from_args(args)
    released = release(
        series,
        partition,
        budget,
        rng,
        zero_noise=args.zero_noise,
        clamp=HEART_RATE_RANGE if args.clamp else None,
    )
    pr_log.info(
        f"Released {len(partition)} bucket averages; total epsilon spent: {budget.total:g}."
    )
    return write_release(released, Path(args.output[0]).resolve(), fmt=args.format)


def _execute_experiment(args: argparse.Namespace) -> dict[str, Path]:
    from pattern_release._utils import write_table
    from pattern_release.data.utils import build_experiment_config
    from pattern_release.main import run_experiment

    overrides = {
        "input": args.input[0] if args.input else None,
        "trials": args.trials,
        "base_seed": _get_seed_from_args(args),
        "zero_noise": True if args.zero_noise else None,
        "timing": True if args.timing else None,
    }
    for key in ("window", "t_d", "t_l", "t_r", "eps1", "eps2", "alpha", "scale_mode"):
        overrides[key] = getattr(args, key)
    config_file = args.config[0] if args.config else None
    cfg = build_experiment_config(config_file=config_file, overrides=overrides)

    result = run_experiment(cfg)

    output_dir = Path(args.output_dir[0]).resolve()
    return {
        "summary": write_table(result.summary, output_dir / "summary.csv", what="Summary"),
        "trials": write_table(result.trials, output_dir / "trials.csv", what="Per-trial results"),
        "trace": write_table(result.trace, output_dir / "trace.csv", what="Trace"),
    }


def _execute_verify_dp(args: argparse.Namespace) -> bool:
    from pattern_release._utils import write_table
    from pattern_release.main import verify_dp

    passed, report = verify_dp(args.alpha, eps1_values=args.eps1, scale_mode=args.scale_mode)
    if args.output:
        write_table(report, Path(args.output[0]).resolve(), what="Privacy ratio report")
    return passed


def _execute_synth(args: argparse.Namespace) -> Path:
    from pattern_release._utils import write_series, write_table
    from pattern_release.data.synthetic import SyntheticSpec, generate_synthetic
    from pattern_release.data.utils import default_config

    spec = SyntheticSpec(
        length=args.length,
        base_level=args.base_level,
        walk_step_sd=args.walk_step_sd,
        jump_count=args.jump_count,
        jump_magnitude_range=tuple(args.jump_magnitude_range),
        value_clip=tuple(default_config()["synthetic_value_clip"]),
        seed=_get_seed_from_args(args) or 0,
    )
    series, jumps = generate_synthetic(spec)
    pr_log.info(f"Generated {len(series)} bins with jumps at: {jumps}")

    output_file = write_series(series, Path(args.output[0]).resolve())
    if args.jumps_output:
        write_table(
            pd.DataFrame({"jump_index": jumps}, dtype="int64"),
            Path(args.jumps_output[0]).resolve(),
            what="Jump indices",
        )
    return output_file
