"""Result tables of the analysis runs."""
import json
import re
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
)

import numpy as np

from filtersem.core.pipeline.error import PipelineError
from filtersem.core.pipeline.study import PartResult
from filtersem.core.table import Row


SUMMARY_COLUMNS = (
    "layer",
    "object_class",
    "part_class",
    "n_gt",
    "best_filter",
    "best_ap",
    "best_raw_ap",
    "ga_ap",
    "ga_filters",
    "ga_selection",
    "top_ap",
    "ga_not_in_top",
    "max_recall",
    "emerged_by_ap",
    "covered",
)
PER_FILTER_COLUMNS = (
    "layer",
    "object_class",
    "part_class",
    "filter",
    "ap",
)
SHARING_COLUMNS = (
    "layer",
    "filter",
    "part_count",
    "parts",
)
TOP_FILTERS_COLUMNS = (
    "layer",
    "object_class",
    "part_class",
    "n",
    "filters",
    "ap",
)


def slug(
    name: str,
) -> str:
    """
    Make a name usable as a file name.

    Args:
        name: a layer, class or part name

    Returns:
        the name with every run of other characters than letters, digits, dot, dash and underscore replaced by a dash
    """
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", name)


def part_stem(
    object_class: str,
    part_class: str,
) -> str:
    """
    Get the file stem of a part class.

    Args:
        object_class: the object class
        part_class: the part class

    Returns:
        the stem
    """
    return f"{slug(object_class)}__{slug(part_class)}"


def join_filters(
    filters: Sequence[int],
) -> str:
    """
    Format filter indices for a table cell.

    Args:
        filters: the filters

    Returns:
        the indices separated by spaces
    """
    return " ".join(str(j) for j in filters)


def summary_row(
    result: PartResult,
) -> Row:
    """
    Get the summary row of a part class in a layer ; GA cells are empty when the search is disabled.

    Args:
        result: the analysis of the part class

    Returns:
        the row
    """
    ga_ap: Optional[float] = None
    max_recall = result.best_report.max_recall
    if result.ga is not None:
        ga_ap = float(result.ga.best.fitness or 0.0)
        max_recall = result.ga_report.max_recall if result.ga_report is not None else 0.0
    return {
        "layer": result.layer,
        "object_class": result.object_class,
        "part_class": result.part_class,
        "n_gt": result.n_gt,
        "best_filter": result.best_filter,
        "best_ap": result.best_ap,
        "best_raw_ap": result.best_raw_ap,
        "ga_ap": "" if ga_ap is None else ga_ap,
        "ga_filters": "" if result.ga is None else len(result.ga_filters),
        "ga_selection": join_filters(result.ga_filters),
        "top_ap": result.top_ap,
        "ga_not_in_top": "" if result.ga is None else result.not_in_top,
        "max_recall": float(max_recall),
        "emerged_by_ap": result.emergence.emerged_by_ap,
        "covered": result.emergence.covered,
    }


def per_filter_rows(
    result: PartResult,
) -> List[Row]:
    """
    Get the AP of every single filter for a part class.

    Args:
        result: the analysis of the part class

    Returns:
        the rows, in filter order
    """
    return [
        {
            "layer": result.layer,
            "object_class": result.object_class,
            "part_class": result.part_class,
            "filter": j,
            "ap": float(ap),
        }
        for j, ap in enumerate(result.per_filter_aps)
    ]


def sharing_rows(
    layer: str,
    results: Sequence[PartResult],
) -> List[Row]:
    """
    Get the filters the genetic search selected for more than one part class of a layer.

    Args:
        layer: the layer
        results: the analyses of the part classes in the layer

    Returns:
        the rows, in filter order
    """
    parts_by_filter: Dict[int, List[str]] = {}
    for result in results:
        for j in result.ga_filters:
            parts_by_filter.setdefault(j, []).append(result.key)
    return [
        {
            "layer": layer,
            "filter": j,
            "part_count": len(parts),
            "parts": ";".join(parts),
        }
        for j, parts in sorted(parts_by_filter.items())
        if len(parts) > 1
    ]


def layer_summary(
    layer: str,
    results: Sequence[PartResult],
) -> Dict[str, Any]:
    """
    Get the mean scores of a layer over its part classes.

    Args:
        layer: the layer
        results: the analyses of the part classes in the layer

    Returns:
        the JSON-compatible summary ; means are None without part class
    """

    def _mean(values: Sequence[float]) -> Optional[float]:
        return float(np.mean(values)) if len(values) else None

    searched = [result for result in results if result.ga is not None]
    return {
        "layer": layer,
        "parts": len(results),
        "best_map": _mean([result.best_ap for result in results]),
        "best_raw_map": _mean([result.best_raw_ap for result in results]),
        "ga_map": _mean([float(result.ga.best.fitness or 0.0) for result in searched if result.ga is not None]),
        "mean_ga_filters": _mean([len(result.ga_filters) for result in searched]),
        "top_map": _mean([result.top_ap for result in results]),
        "emerged_by_ap": sum(1 for result in results if result.emergence.emerged_by_ap),
        "covered": sum(1 for result in results if result.emergence.covered),
    }


def write_json(
    path: Path,
    data: Any,
) -> Path:
    """
    Write a JSON result file.

    Args:
        path: the destination file ; parent directories are created
        data: the JSON-compatible data

    Returns:
        the path of the written file
    """
    path.parent.mkdir(
        parents=True,
        exist_ok=True,
    )
    path.write_text(
        json.dumps(
            data,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return path


def read_json(
    path: Path,
) -> Any:
    """
    Read a JSON result file.

    Args:
        path: the file

    Returns:
        the data

    Raises:
        PipelineError: if the file is missing or malformed
    """
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise PipelineError(f"Unable to read result file {path}") from e
