"""Discrimination tables and correlation files."""
import json
from dataclasses import asdict
from pathlib import Path
from typing import (
    Iterable,
    List,
    Sequence,
)

from filtersem.core.discrim.correlation import CorrelationReport
from filtersem.core.discrim.scores import DiscrimScore
from filtersem.core.table import (
    Row,
    write_table,
)


DISCRIM_COLUMNS = (
    "object_class",
    "target",
    "layer",
    "filter",
    "part_class",
    "delta",
    "sigma",
    "is_discriminative",
    "n_images",
)


def write_discrim_table(
    path: Path,
    rows: Iterable[Row],
) -> Path:
    """
    Write discrimination rows as CSV.

    Args:
        path: the destination file
        rows: rows made by `discrim_rows`

    Returns:
        the path of the written file
    """
    return write_table(
        path=path,
        rows=rows,
        columns=DISCRIM_COLUMNS,
    )


def discrim_rows(
    object_class: str,
    scores: Sequence[DiscrimScore],
) -> List[Row]:
    """
    Convert scores to table rows.

    Args:
        object_class: the class the scores were measured on
        scores: the scores

    Returns:
        the rows
    """
    return [
        {
            "object_class": object_class,
            "target": score.target,
            "layer": score.layer or "",
            "filter": "" if score.filter is None else score.filter,
            "part_class": score.part_class or "",
            "delta": score.delta,
            "sigma": score.sigma,
            "is_discriminative": score.is_discriminative,
            "n_images": len(score.per_image_deltas),
        }
        for score in scores
    ]


def write_correlations(
    path: Path,
    reports: Sequence[CorrelationReport],
) -> Path:
    """
    Write correlation reports as JSON.

    Args:
        path: the destination file
        reports: the reports

    Returns:
        the path of the written file
    """
    path.parent.mkdir(
        parents=True,
        exist_ok=True,
    )
    path.write_text(
        json.dumps(
            [asdict(report) for report in reports],
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return path
