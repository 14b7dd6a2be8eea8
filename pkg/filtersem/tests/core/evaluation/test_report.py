import tempfile
import unittest
from pathlib import Path

import numpy as np

from filtersem.core.evaluation.matching import (
    EvalReport,
    evaluate_arrays,
)
from filtersem.core.evaluation.report import (
    CURVE_COLUMNS,
    emergence,
    write_curves,
)
from filtersem.core.table import read_table


def _report(
    hits: int,
    misses: int,
    n_gt: int,
) -> EvalReport:
    boxes = [[10.0 * i, 0.0, 5.0, 5.0] for i in range(hits)] + [[100.0, 100.0, 5.0, 5.0]] * misses
    return evaluate_arrays(
        images=np.zeros(hits + misses, dtype=np.intp),
        boxes=np.array(boxes).reshape(-1, 4),
        scores=np.linspace(1.0, 0.1, hits + misses),
        gt_images=np.zeros(n_gt, dtype=np.intp),
        gt_boxes=np.array([[10.0 * i, 0.0, 5.0, 5.0] for i in range(n_gt)]),
        part_class="wheel",
    )


class TestEmergence(unittest.TestCase):
    def test_emerged(self) -> None:
        result = emergence(_report(hits=3, misses=1, n_gt=4))
        self.assertTrue(result.emerged_by_ap)
        self.assertTrue(result.covered)

    def test_thresholds_are_strict(self) -> None:
        report = _report(hits=1, misses=0, n_gt=2)
        self.assertEqual(0.5, report.ap)
        result = emergence(
            report=report,
            ap_threshold=0.5,
            recall_threshold=0.5,
        )
        self.assertFalse(result.emerged_by_ap)
        self.assertFalse(result.covered)

    def test_covered_without_precision(self) -> None:
        report = _report(hits=0, misses=0, n_gt=1)
        self.assertFalse(emergence(report).covered)
        late = evaluate_arrays(
            images=np.zeros(21, dtype=np.intp),
            boxes=np.array([[100.0, 100.0, 5.0, 5.0]] * 20 + [[0.0, 0.0, 5.0, 5.0]]),
            scores=np.linspace(1.0, 0.1, 21),
            gt_images=np.zeros(1, dtype=np.intp),
            gt_boxes=np.array([[0.0, 0.0, 5.0, 5.0]]),
        )
        result = emergence(late)
        self.assertFalse(result.emerged_by_ap)
        self.assertTrue(result.covered)

    def test_write_curves(self) -> None:
        report = _report(hits=2, misses=1, n_gt=3)
        with tempfile.TemporaryDirectory() as directory:
            path = write_curves(
                path=Path(directory) / "curves" / "filter_0.csv",
                report=report,
            )
            rows = read_table(
                path=path,
                columns=CURVE_COLUMNS,
            )
        self.assertEqual([1, 2, 3], [row["rank"] for row in rows])
        self.assertEqual([0, 0, 1], [row["false_positives"] for row in rows])
        self.assertAlmostEqual(2.0 / 3.0, rows[-1]["recall"])
