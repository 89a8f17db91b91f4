"""General utility functions: reading series, writing tables, progress display."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    SpinnerColumn,
    TaskProgressColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)

from pattern_release.logger import pr_logger
from pattern_release.series import BinSeries, RawSeries

pr_log = pr_logger(__name__)


def _malformed(csv_file: Path, line: int, text: str, what: str) -> ValueError:
    return ValueError(f"Malformed {what} on line {line} of '{csv_file}': '{text}'")


def read_raw_series(csv_file: Path | str) -> RawSeries:
    """Read a raw series from a CSV file.

    One record per line, either ``value`` or ``timestamp,value``,
    with an optional header line. Blank lines are skipped.

    Parameters
    ----------
    csv_file : :obj:`pathlib.Path` or :obj:`str`

    Returns
    -------
    RawSeries
    """
    csv_file = Path(csv_file).resolve()
    if not csv_file.exists():
        raise FileNotFoundError(f"Could not find series at '{csv_file}'")

    try:
        df = pd.read_csv(
            csv_file,
            header=None,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
        )
    except pd.errors.EmptyDataError as exc:
        raise ValueError(f"Cannot read a series from empty file '{csv_file}'.") from exc
    except pd.errors.ParserError as exc:
        raise ValueError(f"Malformed CSV '{csv_file}': {exc}") from exc

    if df.shape[1] > 2:
        raise ValueError(
            f"Expected 1 or 2 columns in '{csv_file}' (value or timestamp,value), "
            f"found {df.shape[1]}."
        )

    df = df.fillna("").apply(lambda column: column.str.strip())
    # 1-based line numbers
    df.index = df.index + 1
    df = df[(df != "").any(axis=1)]
    if df.empty:
        raise ValueError(f"Cannot read a series from empty file '{csv_file}'.")

    first = df.index[0]
    if first == 1 and np.isnan(pd.to_numeric(df.iloc[0, -1], errors="coerce")):
        pr_log.debug(f"Skipping header of '{csv_file}': {df.iloc[0].tolist()}")
        df = df.iloc[1:]
        if df.empty:
            raise ValueError(f"Cannot read a series from '{csv_file}': only a header found.")

    values = pd.to_numeric(df.iloc[:, -1], errors="coerce")
    bad = values.isna() | ~np.isfinite(values)
    if bad.any():
        line = int(bad.idxmax())
        raise _malformed(csv_file, line, ",".join(df.loc[line]), "value")

    timestamps = None
    if df.shape[1] == 2:
        as_numbers = pd.to_numeric(df.iloc[:, 0], errors="coerce")
        bad = as_numbers.isna() | (as_numbers != np.floor(as_numbers))
        if bad.any():
            line = int(bad.idxmax())
            raise _malformed(csv_file, line, ",".join(df.loc[line]), "timestamp")
        timestamps = as_numbers.to_numpy(dtype=np.int64)

    return RawSeries(values=values.to_numpy(dtype=np.float64), timestamps=timestamps)


def write_series(series: BinSeries, output_file: Path) -> Path:
    """Write bins as a one-column CSV readable by :func:`read_raw_series`."""
    df = pd.DataFrame({"value": series.bins})
    return write_table(df, output_file, what="Series")


def write_table(df: pd.DataFrame, output_file: Path, what: str = "Table") -> Path:
    output_file.parent.mkdir(exist_ok=True, parents=True)
    df.to_csv(output_file, index=False, float_format="%.17g", lineterminator="\n")
    pr_log.info(f"{what} saved to: {output_file}")
    return output_file


def write_json(content: dict[str, Any], output_file: Path, what: str = "JSON") -> Path:
    output_file.parent.mkdir(exist_ok=True, parents=True)
    with open(output_file, "w") as f:
        json.dump(content, f, indent=2)
        f.write("\n")
    pr_log.info(f"{what} saved to: {output_file}")
    return output_file


def progress_bar(text: str, color: str = "green") -> Progress:
    return Progress(
        TextColumn(f"[{color}]{text}"),
        SpinnerColumn("dots"),
        TimeElapsedColumn(),
        BarColumn(),
        MofNCompleteColumn(),
        TaskProgressColumn(),
        TimeRemainingColumn(),
    )
