"""Markdown rendering of a pipeline run."""
import math
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Sequence,
)

from filtersem.core.pipeline.pipeline import (
    SUMMARY_FILE,
    SUMMARY_JSON_FILE,
)
from filtersem.core.pipeline.results import (
    SUMMARY_COLUMNS,
    read_json,
)
from filtersem.core.table import (
    Row,
    read_table,
)


REPORT_FILE = "report.md"


def _is_blank(value: Any) -> bool:
    return value is None or value == "" or (isinstance(value, float) and math.isnan(value))


def _cell(
    value: Any,
    scale: float = 100.0,
) -> str:
    if _is_blank(value):
        return "-"
    return f"{float(value) * scale:.1f}"


def _count(value: Any) -> str:
    return "-" if _is_blank(value) else str(int(value))


def render_report(
    rows: Sequence[Row],
    summary: Dict[str, Any],
) -> str:
    """
    Render the results of a pipeline run as Markdown.

    Every part class gets one line with, for each layer, the AP of the best filter, the AP of the GA combination and
    its size ; APs are given in percent. Mean lines and emergence counts follow.

    Args:
        rows: the rows of the summary table
        summary: the layer summaries

    Returns:
        the Markdown text
    """
    layers: List[str] = [str(entry["layer"]) for entry in summary.get("layers", [])]
    by_part: Dict[str, Dict[str, Row]] = {}
    for row in rows:
        by_part.setdefault(f"{row['object_class']}/{row['part_class']}", {})[str(row["layer"])] = row
    lines = [
        "# Part detectors",
        "",
        "| Part | " + " | ".join(f"{layer} Best | {layer} GA | {layer} nFilters" for layer in layers) + " |",
        "|---|" + "---|---|---|" * len(layers),
    ]
    for key in sorted(by_part):
        cells = []
        for layer in layers:
            row = by_part[key].get(layer, {})
            cells.extend(
                [
                    _cell(row.get("best_ap")),
                    _cell(row.get("ga_ap")),
                    _count(row.get("ga_filters")),
                ]
            )
        lines.append(f"| {key} | " + " | ".join(cells) + " |")
    parts = summary.get("parts", len(by_part))
    mean_cells = []
    for entry in summary.get("layers", []):
        mean_cells.extend(
            [
                _cell(entry.get("best_map")),
                _cell(entry.get("ga_map")),
                _cell(entry.get("mean_ga_filters"), scale=1.0),
            ]
        )
    lines.append(f"| mean ({parts} parts) | " + " | ".join(mean_cells) + " |")
    lines.extend(
        [
            "",
            "## Regression and baselines",
            "",
            "| Layer | Best (raw boxes) | Best (regressed) | TopFilters | GA |",
            "|---|---|---|---|---|",
        ]
    )
    for entry in summary.get("layers", []):
        lines.append(
            f"| {entry['layer']} | {_cell(entry.get('best_raw_map'))} | {_cell(entry.get('best_map'))} "
            + f"| {_cell(entry.get('top_map'))} | {_cell(entry.get('ga_map'))} |"
        )
    lines.extend(
        [
            "",
            "## Emergence",
            "",
            "| Layer | Emerged (AP) | Covered (recall) | Parts |",
            "|---|---|---|---|",
        ]
    )
    for entry in summary.get("layers", []):
        lines.append(f"| {entry['layer']} | {entry['emerged_by_ap']} | {entry['covered']} | {entry['parts']} |")
    return "\n".join(lines) + "\n"


def write_report(
    output: Path,
) -> Path:
    """
    Render the results of the pipeline run of an output directory.

    Args:
        output: the output directory of the run

    Returns:
        the path of the written report

    Raises:
        DataError: if the run results are missing or malformed
    """
    text = render_report(
        rows=read_table(
            path=output / SUMMARY_FILE,
            columns=SUMMARY_COLUMNS,
        ),
        summary=read_json(output / SUMMARY_JSON_FILE),
    )
    path = output / REPORT_FILE
    path.write_text(
        text,
        encoding="utf-8",
    )
    return path
