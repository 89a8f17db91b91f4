"""General parser for the pattern_release package."""

from __future__ import annotations

from argparse import ArgumentParser, HelpFormatter
from typing import Any

from pattern_release import __version__
from pattern_release.data.utils import default_config
from pattern_release.noise import ScaleMode

SEED_ENV_VAR = "PATTERN_RELEASE_SEED"


def base_parser(formatter_class: type[HelpFormatter] = HelpFormatter) -> ArgumentParser:
    parser = ArgumentParser(
        prog="pattern_release",
        description="""
        Differentially private release of time-series bins
        that keeps rapid changes visible.
        """,
        formatter_class=formatter_class,
    )
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        version=f"{__version__}",
    )
    return parser


def add_verbosity(parser: ArgumentParser) -> ArgumentParser:
    parser.add_argument(
        "--verbosity",
        help="""
        Verbosity level.
        """,
        required=False,
        choices=[0, 1, 2, 3],
        default=2,
        type=int,
        nargs=1,
    )
    return parser


def add_noise_arguments(parser: ArgumentParser) -> ArgumentParser:
    parser.add_argument(
        "--seed",
        help=f"""
        Seed of the random generator.
        Defaults to the ``{SEED_ENV_VAR}`` environment variable, then to 0.
        """,
        required=False,
        default=None,
        type=int,
    )
    parser.add_argument(
        "--zero-noise",
        "--zero_noise",
        dest="zero_noise",
        action="store_true",
        help="Force every Laplace draw to 0 (testing only: the output is not private).",
    )
    return parser


def add_threshold_arguments(parser: ArgumentParser, use_defaults: bool = True) -> ArgumentParser:
    """Add the window, threshold and budget options.

    Without ``use_defaults`` every option defaults to ``None`` so that only
    the values given on the command line override a configuration.
    """
    config = default_config()

    def default(key: str) -> Any:
        return config[key] if use_defaults else None

    parser.add_argument(
        "--window",
        help="""
        Number of raw records averaged into one bin.
        """,
        required=False,
        default=default("window"),
        type=int,
    )
    parser.add_argument(
        "--t_d",
        help="Maximum spread of the values in one bucket.",
        default=default("t_d"),
        type=float,
    )
    parser.add_argument(
        "--t_l",
        help="Maximum number of bins in one bucket.",
        default=default("t_l"),
        type=int,
    )
    parser.add_argument(
        "--t_r",
        help="Jump between two adjacent bins above which both bins are isolated.",
        default=default("t_r"),
        type=float,
    )
    parser.add_argument(
        "--eps1",
        help="Privacy budget of the partitioning.",
        default=default("eps1"),
        type=float,
    )
    parser.add_argument(
        "--eps2",
        help="Privacy budget of the release of bucket averages.",
        default=default("eps2"),
        type=float,
    )
    parser.add_argument(
        "--alpha",
        help="Sensitivity: largest change of one bin between neighboring databases.",
        default=default("alpha"),
        type=float,
    )
    parser.add_argument(
        "--scale_mode",
        help="""
        Scale of the threshold noise:
        ``proof_alpha`` (alpha / eps1) or ``paper_unit`` (1 / eps1, not private if alpha > 1).
        """,
        choices=[mode.value for mode in ScaleMode],
        default=default("scale_mode"),
        type=str,
    )
    return parser


def add_series_arguments(parser: ArgumentParser) -> ArgumentParser:
    parser.add_argument(
        "-i",
        "--input",
        help="""
        Path to a CSV file with one raw record per line:
        ``value`` or ``timestamp,value``, optional header.
        """,
        required=True,
        nargs=1,
    )
    parser = add_threshold_arguments(parser)
    parser.add_argument(
        "--baseline",
        action="store_true",
        help="Use the baseline partitioner (spread and length rules only).",
    )
    return parser


def global_parser(formatter_class: type[HelpFormatter] = HelpFormatter) -> ArgumentParser:
    parser = base_parser(formatter_class=formatter_class)
    subparsers = parser.add_subparsers(
        dest="command",
        help="Choose a subcommand",
        required=True,
    )

    partition_parser = subparsers.add_parser(
        "partition",
        help="Partition one series into buckets and save them as JSON.",
        formatter_class=parser.formatter_class,
    )
    partition_parser = add_series_arguments(partition_parser)
    partition_parser = add_noise_arguments(partition_parser)
    partition_parser = add_verbosity(partition_parser)
    partition_parser.add_argument(
        "-o",
        "--output",
        help="Path of the JSON file to write.",
        required=True,
        nargs=1,
    )

    release_parser = subparsers.add_parser(
        "release",
        help="Partition one series and release its noisy bucket averages.",
        formatter_class=parser.formatter_class,
    )
    release_parser = add_series_arguments(release_parser)
    release_parser = add_noise_arguments(release_parser)
    release_parser = add_verbosity(release_parser)
    release_parser.add_argument(
        "--clamp",
        action="store_true",
        help="Clip released values to the heart-rate range 50..210.",
    )
    release_parser.add_argument(
        "--format",
        help="Output format.",
        choices=["csv", "json"],
        default="csv",
        type=str,
    )
    release_parser.add_argument(
        "-o",
        "--output",
        help="Path of the file to write.",
        required=True,
        nargs=1,
    )

    experiment_parser = subparsers.add_parser(
        "experiment",
        help="Compare the pattern-preserving partitioner against the baseline over many trials.",
        formatter_class=parser.formatter_class,
    )
    experiment_parser.add_argument(
        "--config",
        help="""
        Path to a YAML file of flat ``key: value`` pairs
        overriding the default experiment configuration.
        """,
        required=False,
        default=None,
        nargs=1,
    )
    experiment_parser.add_argument(
        "-i",
        "--input",
        help="Path to a raw CSV series. Defaults to synthetic series.",
        required=False,
        default=None,
        nargs=1,
    )
    experiment_parser.add_argument(
        "--trials",
        help="Number of trials.",
        required=False,
        default=None,
        type=int,
    )
    experiment_parser.add_argument(
        "--timing",
        action="store_true",
        help="Record wall-clock times (makes the summary machine-dependent).",
    )
    experiment_parser = add_threshold_arguments(experiment_parser, use_defaults=False)
    experiment_parser = add_noise_arguments(experiment_parser)
    experiment_parser = add_verbosity(experiment_parser)
    experiment_parser.add_argument(
        "-o",
        "--output_dir",
        help="""
        Fullpath to the directory where summary, per-trial and trace CSV files will be stored.
        """,
        required=True,
        nargs=1,
    )

    verify_parser = subparsers.add_parser(
        "verify-dp",
        help="Check the closed-form privacy ratio of the threshold noise over a grid.",
        formatter_class=parser.formatter_class,
    )
    verify_parser.add_argument(
        "--alpha",
        help="Sensitivity of one bin.",
        default=default_config()["alpha"],
        type=float,
    )
    verify_parser.add_argument(
        "--eps1",
        help="Partitioning budgets to check.",
        default=[0.1, 0.5, 1.0, 2.0],
        type=float,
        nargs="+",
    )
    verify_parser.add_argument(
        "--scale_mode",
        help="Scale of the threshold noise.",
        choices=[mode.value for mode in ScaleMode],
        default=ScaleMode.PROOF_ALPHA.value,
        type=str,
    )
    verify_parser.add_argument(
        "-o",
        "--output",
        help="Optional path of a CSV report of every grid point.",
        required=False,
        default=None,
        nargs=1,
    )
    verify_parser = add_verbosity(verify_parser)

    synth_parser = subparsers.add_parser(
        "synth",
        help="Generate a synthetic heart-rate-like series with injected jumps.",
        formatter_class=parser.formatter_class,
    )
    config = default_config()
    synth_parser.add_argument(
        "--length",
        help="Number of bins.",
        default=config["synthetic_length"],
        type=int,
    )
    synth_parser.add_argument(
        "--base_level",
        help="Starting value.",
        default=config["synthetic_base_level"],
        type=float,
    )
    synth_parser.add_argument(
        "--walk_step_sd",
        help="Standard deviation of the step between two bins.",
        default=config["synthetic_walk_step_sd"],
        type=float,
    )
    synth_parser.add_argument(
        "--jump_count",
        help="Number of injected level shifts.",
        default=config["synthetic_jump_count"],
        type=int,
    )
    synth_parser.add_argument(
        "--jump_magnitude_range",
        help="Lower and upper bound of the shift magnitudes.",
        default=config["synthetic_jump_magnitude_range"],
        type=float,
        nargs=2,
    )
    synth_parser = add_noise_arguments(synth_parser)
    synth_parser = add_verbosity(synth_parser)
    synth_parser.add_argument(
        "-o",
        "--output",
        help="Path of the CSV file to write.",
        required=True,
        nargs=1,
    )
    synth_parser.add_argument(
        "--jumps_output",
        help="Optional path of a CSV file listing the injected jump indices.",
        required=False,
        default=None,
        nargs=1,
    )
    return parser
