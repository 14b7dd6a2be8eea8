"""Tabular result files."""
from pathlib import Path
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Sequence,
)

import pandas as pd

from filtersem.core.exceptions import DataError


Row = Dict[str, Any]


def write_table(
    path: Path,
    rows: Iterable[Row],
    columns: Sequence[str],
) -> Path:
    """
    Write rows as a CSV file with a fixed column order.

    Args:
        path: the destination file ; parent directories are created
        rows: the rows
        columns: the column names, in order

    Returns:
        the path of the written file
    """
    path.parent.mkdir(
        parents=True,
        exist_ok=True,
    )
    frame = pd.DataFrame(
        list(rows),
        columns=list(columns),
    )
    frame.to_csv(
        path,
        index=False,
        lineterminator="\n",
    )
    return path


def read_table(
    path: Path,
    columns: Sequence[str],
) -> List[Row]:
    """
    Read a CSV file written by `write_table`.

    Args:
        path: the file
        columns: the columns that must be present

    Returns:
        the rows

    Raises:
        DataError: if the file is missing or lacks a column
    """
    if not path.is_file():
        raise DataError(f"Missing result table {path}")
    try:
        frame = pd.read_csv(path)
    except (OSError, ValueError) as e:
        raise DataError(f"Unable to read result table {path}") from e
    missing = [column for column in columns if column not in frame.columns]
    if missing:
        raise DataError(f"Result table {path} lacks columns {', '.join(missing)}")
    return frame.to_dict(orient="records")
