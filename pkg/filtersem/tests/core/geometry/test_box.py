import unittest

import numpy as np

from filtersem.core.geometry.box import (
    Box,
    clip_boxes,
    mask_box,
    pairwise_iou,
    rowwise_iou,
)


class TestBox(unittest.TestCase):
    def test_from_center(self) -> None:
        box = Box.from_center(
            cx=10.0,
            cy=6.0,
            w=4.0,
            h=2.0,
        )
        self.assertEqual(Box(8.0, 5.0, 4.0, 2.0), box)
        self.assertEqual((10.0, 6.0), box.center)
        self.assertEqual(8.0, box.area)

    def test_contains_is_half_open(self) -> None:
        box = Box(2.0, 2.0, 3.0, 3.0)
        self.assertTrue(box.contains(2.0, 2.0))
        self.assertTrue(box.contains(4.9, 4.9))
        self.assertFalse(box.contains(5.0, 3.0))
        self.assertFalse(box.contains(3.0, 5.0))

    def test_clip(self) -> None:
        self.assertEqual(Box(0.0, 0.0, 6.0, 6.0), Box(-4.0, -4.0, 10.0, 10.0).clip(24, 24))
        self.assertEqual(Box(20.0, 18.0, 4.0, 6.0), Box(20.0, 18.0, 10.0, 10.0).clip(24, 24))

    def test_clip_outside_keeps_one_pixel(self) -> None:
        clipped = clip_boxes(
            boxes=np.array([[30.0, -9.0, 4.0, 4.0]]),
            width=24,
            height=24,
        )
        np.testing.assert_array_equal([[23.0, 0.0, 1.0, 1.0]], clipped)

    def test_pairwise_iou(self) -> None:
        a = np.array([[0.0, 0.0, 2.0, 2.0], [10.0, 10.0, 1.0, 1.0]])
        b = np.array([[1.0, 0.0, 2.0, 2.0], [0.0, 0.0, 2.0, 2.0], [5.0, 5.0, 1.0, 1.0]])
        expected = np.array([[2.0 / 6.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
        np.testing.assert_allclose(expected, pairwise_iou(a, b))

    def test_pairwise_iou_symmetric(self) -> None:
        rng = np.random.default_rng(0)
        a = np.hstack([rng.uniform(0, 20, (5, 2)), rng.uniform(1, 8, (5, 2))])
        b = np.hstack([rng.uniform(0, 20, (7, 2)), rng.uniform(1, 8, (7, 2))])
        np.testing.assert_allclose(pairwise_iou(a, b), pairwise_iou(b, a).T)
        self.assertTrue(((pairwise_iou(a, b) >= 0) & (pairwise_iou(a, b) <= 1)).all())

    def test_rowwise_iou(self) -> None:
        a = np.array([[0.0, 0.0, 2.0, 2.0], [0.0, 0.0, 4.0, 1.0]])
        b = np.array([[1.0, 1.0, 2.0, 2.0], [0.0, 0.0, 2.0, 1.0]])
        np.testing.assert_allclose([1.0 / 7.0, 0.5], rowwise_iou(a, b))

    def test_rowwise_iou_empty_boxes(self) -> None:
        self.assertEqual(0.0, float(rowwise_iou(np.zeros(4), np.zeros(4))))

    def test_mask_box(self) -> None:
        mask = np.zeros((10, 12), dtype=bool)
        mask[3:6, 2:9] = True
        mask[7, 4] = True
        self.assertEqual(Box(2.0, 3.0, 7.0, 5.0), mask_box(mask))
