import unittest

import numpy as np

from filtersem.core.stimulus.activation import (
    find_maxima,
    local_maxima,
)


class TestLocalMaxima(unittest.TestCase):
    def test_strict_maxima(self) -> None:
        feature_map = np.array(
            [
                [0.0, 0.0, 0.0, 0.0, 0.0],
                [0.0, 3.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 2.0, 2.0],
                [0.0, 0.0, 0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0, 5.0],
            ]
        )
        activations = local_maxima(
            feature_map=feature_map,
            layer="conv2",
            filter_index=4,
            image_id="img",
        )
        self.assertEqual([(4, 4, 5.0), (1, 1, 3.0), (0, 4, 1.0)], [(a.c, a.r, a.value) for a in activations])
        self.assertTrue(all(a.layer == "conv2" and a.filter == 4 and a.image_id == "img" for a in activations))

    def test_plateau_is_not_a_maximum(self) -> None:
        feature_map = np.zeros((4, 4))
        feature_map[1, 1:3] = 2.0
        self.assertEqual([], local_maxima(feature_map))

    def test_no_activation_on_non_positive_map(self) -> None:
        feature_map = -np.ones((4, 4))
        feature_map[2, 2] = -0.5
        self.assertEqual([], local_maxima(feature_map))

    def test_min_value(self) -> None:
        feature_map = np.zeros((5, 5))
        feature_map[1, 1] = 0.5
        feature_map[3, 3] = 1.5
        activations = local_maxima(
            feature_map=feature_map,
            min_value=1.0,
        )
        self.assertEqual([(3, 3)], [(a.c, a.r) for a in activations])

    def test_neighborhood(self) -> None:
        feature_map = np.arange(16, dtype=np.float64).reshape(4, 4)
        feature_map[0, 3] = 100.0
        (activation,) = [a for a in local_maxima(feature_map) if (a.c, a.r) == (3, 0)]
        self.assertEqual((0.0, 0.0, 0.0, 2.0, 100.0, 0.0, 6.0, 7.0, 0.0), activation.neighborhood)

    def test_find_maxima_order(self) -> None:
        maps = np.zeros((3, 6, 6))
        maps[2, 1, 1] = 1.0
        maps[0, 4, 4] = 2.0
        maps[0, 1, 4] = 2.0
        maps[0, 2, 1] = 7.0
        arrays = find_maxima(maps)
        self.assertEqual([0, 0, 0, 2], arrays.filters.tolist())
        self.assertEqual([7.0, 2.0, 2.0, 1.0], arrays.values.tolist())
        self.assertEqual([2, 1, 4, 1], arrays.rows.tolist())
        self.assertEqual([1, 4, 4, 1], arrays.cols.tolist())

    def test_find_maxima_empty(self) -> None:
        arrays = find_maxima(np.zeros((2, 3, 3)))
        self.assertEqual(0, len(arrays))
        self.assertEqual((0, 9), arrays.neighborhoods.shape)

    def test_take(self) -> None:
        maps = np.zeros((1, 5, 5))
        maps[0, 1, 1] = 1.0
        maps[0, 3, 3] = 2.0
        arrays = find_maxima(maps)
        subset = arrays.take(np.array([1]))
        self.assertEqual([1.0], subset.values.tolist())
        self.assertEqual(1, len(subset.to_activations(layer="conv1")))
