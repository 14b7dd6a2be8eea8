import unittest

from filtersem.core.corpus.matched import (
    matched_filter_detections,
    matched_filter_report,
)
from filtersem.core.corpus.synthetic import (
    ObjectLayout,
    PartLayout,
    SyntheticLayout,
    generate_synthetic,
)
from filtersem.core.evaluation.error import UndefinedAPError
from filtersem.core.nn.error import NetworkConfigurationError


def _layout() -> SyntheticLayout:
    return SyntheticLayout(
        objects={
            "plate": ObjectLayout(
                parts={"spot": PartLayout(pattern="disc", channel=1, x=0.4, y=0.6, size=0.3)},
                min_size=0.5,
                max_size=0.5,
                tint=0.0,
            ),
        },
        image_size=64,
        noise=0.02,
    )


class TestMatchedFilter(unittest.TestCase):
    def test_finds_planted_parts(self) -> None:
        images = generate_synthetic(
            seed=4,
            n_images=12,
            layout=_layout(),
        )
        report = matched_filter_report(
            images=images,
            object_class="plate",
            part_class="spot",
            pattern="disc",
            channel=1,
        )
        self.assertEqual(12, report.n_gt)
        self.assertGreaterEqual(report.ap, 0.9)

    def test_detections(self) -> None:
        images = generate_synthetic(
            seed=4,
            n_images=2,
            layout=_layout(),
        )
        detections = matched_filter_detections(
            images=images,
            pattern="disc",
            channel=1,
            sizes=[8, 10],
        )
        self.assertGreater(len(detections), 0)
        self.assertTrue(set(detections.images.tolist()) <= {0, 1})
        self.assertTrue(set(detections.filters.tolist()) <= {0, 1})
        self.assertTrue((detections.boxes[:, 0] >= 0).all())
        self.assertTrue((detections.boxes[:, 0] + detections.boxes[:, 2] <= 64).all())

    def test_missing_part(self) -> None:
        images = generate_synthetic(
            seed=4,
            n_images=2,
            layout=_layout(),
        )
        with self.assertRaises(UndefinedAPError):
            matched_filter_report(
                images=images,
                object_class="plate",
                part_class="rim",
                pattern="ring",
                channel=0,
                sizes=[8],
            )

    def test_unknown_pattern(self) -> None:
        with self.assertRaises(NetworkConfigurationError):
            matched_filter_detections(
                images=[],
                pattern="star",
                channel=0,
                sizes=[5],
            )
