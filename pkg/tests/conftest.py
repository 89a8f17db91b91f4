from __future__ import annotations

import logging
from pathlib import Path

import pytest

from pattern_release.partitioner import PartitionConfig
from pattern_release.series import BinSeries, PrivacyBudget, Thresholds


def root_dir():
    return Path(__file__).parent.parent


def path_test_data():
    return Path(__file__).parent / "data"


def series(*values: float) -> BinSeries:
    return BinSeries(bins=list(values))


@pytest.fixture(autouse=True)
def reset_log_level():
    """CLI tests change the package log level."""
    yield
    logging.getLogger("pattern_release").setLevel(logging.NOTSET)


@pytest.fixture
def heart_rate_csv():
    """11 minutes of heart rate with a jump up at bin 5 and down at bin 9."""
    return path_test_data() / "heart_rate.csv"


@pytest.fixture
def budget():
    return PrivacyBudget(eps1=0.5, eps2=0.5, alpha=160 / 14)


@pytest.fixture
def thresholds():
    return Thresholds(t_d=30.0, t_l=4, t_r=15.0)


@pytest.fixture
def zero_noise_config(thresholds, budget):
    return PartitionConfig(thresholds=thresholds, budget=budget, zero_noise=True)


@pytest.fixture
def write_csv(tmp_path):
    def _write_csv(content: str, name: str = "series.csv") -> Path:
        csv_file = tmp_path / name
        csv_file.write_text(content)
        return csv_file

    return _write_csv
