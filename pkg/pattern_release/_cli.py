"""Command line interface for pattern_release."""

from __future__ import annotations

import sys
from typing import Sequence

from rich_argparse import RichHelpFormatter

from pattern_release._parsers import global_parser
from pattern_release.logger import pr_logger

pr_log = pr_logger()


def set_verbosity(verbosity: int | list[int]) -> None:
    if isinstance(verbosity, list):
        verbosity = verbosity[0]
    if verbosity == 0:
        pr_log.setLevel("ERROR")
    elif verbosity == 1:
        pr_log.setLevel("WARNING")
    elif verbosity == 2:
        pr_log.setLevel("INFO")
    elif verbosity == 3:
        pr_log.setLevel("DEBUG")


def cli(argv: Sequence[str] = sys.argv) -> None:
    """Entry point."""
    parser = global_parser(formatter_class=RichHelpFormatter)

    args, unknowns = parser.parse_known_args(argv[1:])
    if unknowns:
        pr_log.error(f"The following arguments are unknown: {unknowns}")
        exit(1)

    set_verbosity(args.verbosity)

    if args.command == "partition":
        from pattern_release._run import _execute_partition

        _execute_partition(args)
        exit(0)

    if args.command == "release":
        from pattern_release._run import _execute_release

        _execute_release(args)
        exit(0)

    if args.command == "experiment":
        from pattern_release._run import _execute_experiment

        _execute_experiment(args)
        exit(0)

    if args.command == "verify-dp":
        from pattern_release._run import _execute_verify_dp

        if not _execute_verify_dp(args):
            pr_log.error("Privacy ratio check failed.")
            exit(1)
        exit(0)

    if args.command == "synth":
        from pattern_release._run import _execute_synth

        _execute_synth(args)
        exit(0)
