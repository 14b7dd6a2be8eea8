"""Emergence criteria and report files."""
from dataclasses import dataclass
from pathlib import Path

from filtersem.core.evaluation.matching import EvalReport
from filtersem.core.table import write_table


CURVE_COLUMNS = (
    "rank",
    "recall",
    "precision",
    "false_positives",
)


@dataclass(frozen=True)
class Emergence:
    """Whether a part emerged as detectable (AP criterion) and whether its instances are covered (recall criterion)."""

    emerged_by_ap: bool
    covered: bool


def emergence(
    report: EvalReport,
    ap_threshold: float = 0.3,
    recall_threshold: float = 0.5,
) -> Emergence:
    """
    Apply the emergence criteria to a report.

    Both comparisons are strict.

    Args:
        report: a report
        ap_threshold: the AP a part must exceed
        recall_threshold: the recall a part must exceed, regardless of false positives

    Returns:
        the criteria
    """
    return Emergence(
        emerged_by_ap=report.ap > ap_threshold,
        covered=report.max_recall > recall_threshold,
    )


def write_curves(
    path: Path,
    report: EvalReport,
) -> Path:
    """
    Write the precision-recall and recall-vs-false-positive curves of a report.

    Args:
        path: the destination file
        report: the report

    Returns:
        the path of the written file
    """
    rows = (
        {
            "rank": i + 1,
            "recall": float(report.recall[i]),
            "precision": float(report.precision[i]),
            "false_positives": int(report.false_positives[i]),
        }
        for i in range(report.n_detections)
    )
    return write_table(
        path=path,
        rows=rows,
        columns=CURVE_COLUMNS,
    )
