from __future__ import annotations

import json

import pandas as pd
import pytest

from pattern_release._cli import cli
from pattern_release._parsers import SEED_ENV_VAR
from pattern_release.main import SUMMARY_COLUMNS


def _run(*args: str) -> int:
    with pytest.raises(SystemExit) as exc_info:
        cli(["pattern_release", *args])
    return exc_info.value.code


def test_partition(heart_rate_csv, tmp_path):
    output_file = tmp_path / "partition.json"

    assert _run("partition", "-i", str(heart_rate_csv), "-o", str(output_file), "--zero-noise") == 0

    content = json.loads(output_file.read_text())
    assert content["algorithm"] == "pattern_preserving"
    assert content["series_len"] == 11
    assert content["buckets"] == [[1, 3], [4, 4], [5, 5], [6, 7], [8, 8], [9, 9], [10, 11]]
    assert content["realized"]["t_d_hat"] == 30.0
    assert content["realized"]["t_r_hat"] == 15.0
    assert content["bin_visits"] == 12
    assert content["backtracks"] == 1
    assert content["epsilon"] == 0.5


def test_partition_baseline(heart_rate_csv, tmp_path):
    output_file = tmp_path / "partition.json"

    assert (
        _run(
            "partition",
            "-i",
            str(heart_rate_csv),
            "-o",
            str(output_file),
            "--zero-noise",
            "--baseline",
        )
        == 0
    )

    content = json.loads(output_file.read_text())
    assert content["algorithm"] == "baseline"
    assert content["buckets"] == [[1, 4], [5, 8], [9, 11]]
    assert content["realized"] is None


def test_partition_window(heart_rate_csv, tmp_path):
    output_file = tmp_path / "partition.json"

    _run("partition", "-i", str(heart_rate_csv), "-o", str(output_file), "--window", "4")

    assert json.loads(output_file.read_text())["series_len"] == 3


def test_release_zero_noise(heart_rate_csv, tmp_path):
    output_file = tmp_path / "release.csv"

    assert _run("release", "-i", str(heart_rate_csv), "-o", str(output_file), "--zero-noise") == 0

    df = pd.read_csv(output_file)
    assert df.columns.tolist() == ["bin_index", "original_absent", "released_value", "bucket_index"]
    assert df["bin_index"].tolist() == list(range(1, 12))
    assert df["released_value"].tolist()[:5] == [73.0, 73.0, 73.0, 75.0, 104.0]
    assert df["bucket_index"].tolist() == [1, 1, 1, 2, 3, 4, 4, 5, 6, 7, 7]
    assert df["original_absent"].all()


def test_release_seed_from_env(heart_rate_csv, tmp_path, monkeypatch):
    with_flag = tmp_path / "with_flag.json"
    with_env = tmp_path / "with_env.json"

    release_args = ["release", "-i", str(heart_rate_csv), "--format", "json"]
    _run(*release_args, "-o", str(with_flag), "--seed", "5")
    monkeypatch.setenv(SEED_ENV_VAR, "5")
    _run(*release_args, "-o", str(with_env))

    assert with_flag.read_bytes() == with_env.read_bytes()
    assert set(json.loads(with_flag.read_text())) == {
        "series_len",
        "buckets",
        "bucket_values",
        "values",
    }


def test_release_bad_seed_env(heart_rate_csv, tmp_path, monkeypatch):
    monkeypatch.setenv(SEED_ENV_VAR, "abc")
    with pytest.raises(ValueError, match=f"{SEED_ENV_VAR} must be an integer"):
        cli(["pattern_release", "release", "-i", str(heart_rate_csv), "-o", str(tmp_path / "r")])


def test_release_missing_input(tmp_path):
    with pytest.raises(FileNotFoundError, match="Could not find series at"):
        cli(
            [
                "pattern_release",
                "release",
                "-i",
                str(tmp_path / "missing.csv"),
                "-o",
                str(tmp_path / "release.csv"),
            ]
        )


@pytest.fixture
def small_config(tmp_path):
    config_file = tmp_path / "config.yml"
    config_file.write_text(
        "trials: 3\nsynthetic_length: 100\nsynthetic_jump_count: 5\nbase_seed: 10\n"
    )
    return config_file


def test_experiment(small_config, tmp_path):
    output_dir = tmp_path / "results"

    assert _run("experiment", "--config", str(small_config), "-o", str(output_dir)) == 0

    summary = pd.read_csv(output_dir / "summary.csv")
    assert summary.columns.tolist() == SUMMARY_COLUMNS
    assert summary["algorithm"].tolist() == ["pattern_preserving", "baseline", "baseline"]
    assert summary["variant"].tolist() == ["t_d=30", "t_d=30", "t_d=15"]
    assert summary["trials"].tolist() == [3, 3, 3]
    assert summary["partition_ms_median"].isna().all()

    trials = pd.read_csv(output_dir / "trials.csv")
    assert len(trials) == 9
    assert sorted(trials["seed"].unique().tolist()) == [11, 12, 13]

    trace = pd.read_csv(output_dir / "trace.csv")
    assert len(trace) == 3 * 100


def test_experiment_is_reproducible(small_config, tmp_path):
    _run("experiment", "--config", str(small_config), "-o", str(tmp_path / "first"))
    _run("experiment", "--config", str(small_config), "-o", str(tmp_path / "second"))

    first = (tmp_path / "first" / "summary.csv").read_bytes()
    assert first == (tmp_path / "second" / "summary.csv").read_bytes()


def test_experiment_overrides(small_config, heart_rate_csv, tmp_path):
    output_dir = tmp_path / "results"

    _run(
        "experiment",
        "--config",
        str(small_config),
        "-i",
        str(heart_rate_csv),
        "--trials",
        "2",
        "--zero-noise",
        "--timing",
        "-o",
        str(output_dir),
    )

    summary = pd.read_csv(output_dir / "summary.csv")
    assert summary["trials"].tolist() == [2, 2, 2]
    assert summary["preservation_mean"].tolist()[0] == 100.0
    assert (summary["total_ms_median"] >= summary["partition_ms_median"]).all()


def test_experiment_threshold_overrides(small_config, tmp_path):
    output_dir = tmp_path / "results"

    _run(
        "experiment",
        "--config",
        str(small_config),
        "--t_d",
        "20",
        "--t_l",
        "1",
        "--eps1",
        "1.0",
        "-o",
        str(output_dir),
    )

    summary = pd.read_csv(output_dir / "summary.csv")
    assert summary["variant"].tolist() == ["t_d=20", "t_d=30", "t_d=15"]
    trials = pd.read_csv(output_dir / "trials.csv")
    assert (trials["buckets"] == 100).all()


def test_verify_dp(tmp_path):
    output_file = tmp_path / "ratios.csv"

    assert _run("verify-dp", "-o", str(output_file)) == 0

    report = pd.read_csv(output_file)
    assert report["bound_ok"].all()


def test_verify_dp_unit_scale_fails():
    assert _run("verify-dp", "--scale_mode", "paper_unit") == 1


def test_synth(tmp_path):
    output_file = tmp_path / "series.csv"
    jumps_file = tmp_path / "jumps.csv"

    assert (
        _run(
            "synth",
            "--length",
            "50",
            "--jump_count",
            "3",
            "--seed",
            "1",
            "-o",
            str(output_file),
            "--jumps_output",
            str(jumps_file),
        )
        == 0
    )

    assert len(pd.read_csv(output_file)) == 50
    assert len(pd.read_csv(jumps_file)["jump_index"]) == 3


def test_unknown_argument(caplog):
    assert _run("verify-dp", "--foo") == 1
    assert "The following arguments are unknown" in caplog.text
