from __future__ import annotations

from pathlib import Path

import pytest

from pattern_release._parsers import global_parser


def test_parser_partition():
    parser = global_parser()
    args = parser.parse_args(
        ["partition", "-i", str(Path()), "-o", str(Path()), "--t_r", "20", "--seed", "3"]
    )
    assert args.command == "partition"
    assert args.t_r == 20.0
    assert args.t_d == 30.0
    assert args.t_l == 4
    assert args.seed == 3
    assert not args.zero_noise
    assert not args.baseline
    assert args.scale_mode == "proof_alpha"
    assert args.window == 1


@pytest.mark.parametrize("flag", ["--zero-noise", "--zero_noise"])
def test_parser_zero_noise(flag):
    parser = global_parser()
    args = parser.parse_args(["partition", "-i", str(Path()), "-o", str(Path()), flag])
    assert args.zero_noise


def test_parser_release():
    parser = global_parser()
    args = parser.parse_args(
        [
            "release",
            "-i",
            str(Path()),
            "-o",
            str(Path()),
            "--format",
            "json",
            "--clamp",
            "--baseline",
            "--eps2",
            "1",
            "--verbosity",
            "3",
        ]
    )
    assert args.format == "json"
    assert args.clamp
    assert args.baseline
    assert args.eps2 == 1.0
    assert args.verbosity == [3]


def test_parser_release_format():
    parser = global_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["release", "-i", str(Path()), "-o", str(Path()), "--format", "tsv"])


def test_parser_experiment():
    parser = global_parser()
    args = parser.parse_args(["experiment", "-o", str(Path()), "--trials", "10", "--timing"])
    assert args.trials == 10
    assert args.timing
    assert args.config is None
    assert args.input is None
    assert args.seed is None
    assert args.t_d is None
    assert args.scale_mode is None


def test_parser_experiment_thresholds():
    parser = global_parser()
    args = parser.parse_args(
        ["experiment", "-o", str(Path()), "--t_d", "20", "--t_l", "6", "--scale_mode", "paper_unit"]
    )
    assert args.t_d == 20.0
    assert args.t_l == 6
    assert args.scale_mode == "paper_unit"
    assert args.t_r is None
    assert args.eps1 is None


def test_parser_verify_dp():
    parser = global_parser()
    args = parser.parse_args(["verify-dp", "--eps1", "0.5", "1", "--scale_mode", "paper_unit"])
    assert args.eps1 == [0.5, 1.0]
    assert args.scale_mode == "paper_unit"
    assert args.output is None


def test_parser_synth():
    parser = global_parser()
    args = parser.parse_args(
        ["synth", "-o", str(Path()), "--jump_count", "3", "--jump_magnitude_range", "16", "25"]
    )
    assert args.jump_count == 3
    assert args.jump_magnitude_range == [16.0, 25.0]
    assert args.length == 1000


def test_parser_requires_command():
    parser = global_parser()
    with pytest.raises(SystemExit):
        parser.parse_args([])
