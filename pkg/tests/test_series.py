"""Domain types and aggregation."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pattern_release.series import (
    BinSeries,
    Bucket,
    Partition,
    PrivacyBudget,
    RawSeries,
    Thresholds,
    aggregate,
    total_epsilon,
    validate_partition,
)

from .conftest import series


@pytest.mark.parametrize(
    "raw, window, expected",
    [
        ([60, 62, 64, 66, 68, 70], 3, [62, 68]),
        ([75], 5, [75]),
        ([50, 60, 70, 80, 90], 2, [55, 75, 90]),
        ([1, 2, 3], 1, [1, 2, 3]),
    ],
)
def test_aggregate(raw, window, expected):
    bins = aggregate(RawSeries(values=raw), window)
    assert bins.bins.tolist() == expected
    assert bins.bin_width == window


@pytest.mark.parametrize("length", [1, 7, 100, 101])
@pytest.mark.parametrize("window", [1, 3, 10])
def test_aggregate_length_and_mass(length, window):
    values = np.random.default_rng(length * window).uniform(50, 210, length)
    bins = aggregate(RawSeries(values=values), window)

    assert len(bins) == math.ceil(length / window)
    sizes = np.minimum(window, length - np.arange(0, length, window))
    assert math.isclose((bins.bins * sizes).sum(), values.sum(), rel_tol=1e-9)


def test_aggregate_errors():
    with pytest.raises(ValueError, match="empty series"):
        aggregate(RawSeries(values=[]), 2)
    with pytest.raises(ValueError, match="window must be a positive integer"):
        aggregate(RawSeries(values=[1.0]), 0)


def test_raw_series_timestamps():
    raw = RawSeries(values=[1, 2, 3], timestamps=[0, 60, 60])
    assert raw.timestamps.tolist() == [0, 60, 60]

    with pytest.raises(ValueError, match="lengths must match"):
        RawSeries(values=[1, 2, 3], timestamps=[0, 60])
    with pytest.raises(ValueError, match="decrease at record 3"):
        RawSeries(values=[1, 2, 3], timestamps=[0, 60, 30])
    with pytest.raises(ValueError, match="Non-finite raw value at record 2"):
        RawSeries(values=[1, np.inf, 3])


def test_bin_series_errors():
    with pytest.raises(ValueError, match="empty series"):
        BinSeries(bins=[])
    with pytest.raises(ValueError, match="Non-finite value at bin 3"):
        BinSeries(bins=[70, 71, np.nan])


def test_bin_series_is_read_only():
    s = series(70, 71)
    with pytest.raises(ValueError):
        s.bins[0] = 1.0


def test_bin_series_slice():
    s = series(70, 71, 72, 73)
    assert s.slice(2, 3).tolist() == [71, 72]


def test_thresholds_validation(caplog):
    with pytest.raises(ValueError, match="'t_d' must be a positive real"):
        Thresholds(t_d=0, t_l=4, t_r=15)
    with pytest.raises(ValueError, match="'t_r' must be a positive real"):
        Thresholds(t_d=30, t_l=4, t_r=math.nan)
    with pytest.raises(TypeError, match="'t_l' must be an integer"):
        Thresholds(t_d=30, t_l=4.0, t_r=15)
    with pytest.raises(ValueError, match="'t_l' must be at least 1"):
        Thresholds(t_d=30, t_l=0, t_r=15)

    Thresholds(t_d=15, t_l=4, t_r=15)
    assert "is not smaller than t_d" in caplog.text


def test_privacy_budget_validation():
    with pytest.raises(ValueError, match="'eps2' must be a positive real"):
        PrivacyBudget(eps1=0.5, eps2=0, alpha=1)
    with pytest.raises(ValueError, match="'alpha' must be a positive real"):
        PrivacyBudget(eps1=0.5, eps2=0.5, alpha=-1)


@pytest.mark.parametrize(
    "eps1, eps2, expected",
    [(0.5, 0.5, 1.0), (1.0, 1e-6, 1.0 + 1e-6), (0.25, 0.75, 1.0)],
)
def test_total_epsilon(eps1, eps2, expected):
    budget = PrivacyBudget(eps1=eps1, eps2=eps2, alpha=1.0)
    assert total_epsilon(budget) == pytest.approx(expected)
    assert budget.total == total_epsilon(budget)


def test_bucket():
    bucket = Bucket(2, 4, (70.0, 75.0, 71.0))
    assert bucket.length == 3
    assert bucket.spread == 5.0
    assert str(bucket) == "[2..4]"
    assert Bucket(2, 4) == bucket

    with pytest.raises(ValueError, match="carries no values"):
        Bucket(1, 1).spread


def test_partition_helpers():
    s = series(70, 72, 100, 101, 99)
    p = Partition.from_ranges([(1, 2), (3, 3), (4, 5)], s)

    assert len(p) == 3
    assert p.series_len == 5
    assert p.ranges() == [(1, 2), (3, 3), (4, 5)]
    assert p.bucket_of_bin().tolist() == [0, 0, 1, 2, 2]
    assert p.starts().tolist() == [1, 3, 4]
    assert p.single_bin_count() == 1
    assert p.buckets[2].values == (101.0, 99.0)


def test_partition_from_ranges_without_series():
    p = Partition.from_ranges([(1, 3), (4, 4)])
    assert p.series_len == 4
    assert all(b.values is None for b in p.buckets)


@pytest.mark.parametrize(
    "ranges, n, valid, message",
    [
        ([(1, 2), (3, 3)], 3, True, None),
        ([(1, 2), (2, 3)], 3, False, "overlap at bin 2"),
        ([(1, 1)], 2, False, "coverage gap at bin 2"),
        ([(2, 3)], 3, False, "coverage gap at bin 1"),
        ([(1, 1), (3, 3)], 3, False, "coverage gap at bin 2"),
        ([(1, 4)], 3, False, "lies outside bins 1..3"),
        ([(1, 2), (3, 2)], 3, False, "empty or reversed"),
    ],
)
def test_validate_partition(ranges, n, valid, message):
    s = BinSeries(bins=np.arange(n, dtype=float) + 70)
    p = Partition(buckets=tuple(Bucket(start, end) for start, end in ranges), series_len=n)

    ok, diagnostics = validate_partition(p, s)

    assert ok is valid
    if message is None:
        assert diagnostics == []
    else:
        assert any(message in d for d in diagnostics)


def test_validate_partition_value_view():
    s = series(70, 71, 72)
    p = Partition(buckets=(Bucket(1, 2, (70.0, 99.0)), Bucket(3, 3, (72.0,))), series_len=3)

    ok, diagnostics = validate_partition(p, s)

    assert not ok
    assert diagnostics == ["bucket 1 values do not match bins [1..2]"]


def test_validate_partition_declared_length():
    s = series(70, 71, 72)
    p = Partition(buckets=(Bucket(1, 3),), series_len=4)

    ok, diagnostics = validate_partition(p, s)

    assert not ok
    assert "partition declares 4 bins, series has 3" in diagnostics


def test_validate_partition_no_bucket():
    ok, diagnostics = validate_partition(Partition(buckets=(), series_len=1), series(70))
    assert not ok
    assert diagnostics == ["coverage gap at bin 1"]
