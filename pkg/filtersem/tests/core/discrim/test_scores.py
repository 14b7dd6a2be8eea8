import tempfile
import unittest
from pathlib import Path
from typing import List

import numpy as np

from filtersem.core.discrim.error import DiscrimError
from filtersem.core.discrim.export import (
    DISCRIM_COLUMNS,
    discrim_rows,
    write_discrim_table,
)
from filtersem.core.discrim.scores import (
    class_score,
    filter_discrim,
    layer_discrim,
    object_part_discrims,
    part_discrim,
)
from filtersem.core.nn.engine import (
    AblationSpec,
    forward,
)
from filtersem.core.nn.error import NetworkConfigurationError
from filtersem.core.nn.weights import zero_filter
from filtersem.core.pool import WorkerPool
from filtersem.core.table import read_table
from filtersem.tests.networks import toy_network


def _images(
    count: int = 3,
) -> List[np.ndarray]:
    rng = np.random.default_rng(4)
    return [rng.random((3, 24, 24)).astype(np.float32) for _ in range(count)]


def _mask(
    top: int,
    left: int,
    side: int,
) -> np.ndarray:
    mask = np.zeros((24, 24), dtype=bool)
    mask[top : top + side, left : left + side] = True
    return mask


class TestClassScore(unittest.TestCase):
    def test_modes(self) -> None:
        result = forward(
            net=toy_network(),
            input=_images(1)[0],
        )
        self.assertAlmostEqual(float(result.scores[1]), class_score(result, 1, "softmax"))
        self.assertIsNotNone(result.logits)
        self.assertAlmostEqual(float(result.logits[1]), class_score(result, 1, "logit"))

    def test_errors(self) -> None:
        result = forward(
            net=toy_network(),
            input=_images(1)[0],
        )
        with self.assertRaises(NetworkConfigurationError):
            class_score(result, 0, "probit")
        with self.assertRaises(NetworkConfigurationError):
            class_score(result, 3, "softmax")


class TestLayerDiscrim(unittest.TestCase):
    def test_matches_zeroed_weights(self) -> None:
        net = toy_network()
        images = _images()
        scores = layer_discrim(
            net=net,
            images=images,
            class_index=2,
            layer="conv2",
        )
        self.assertEqual(8, len(scores))
        for j in (0, 3, 7):
            zeroed = zero_filter(
                net=net,
                layer_name="conv2",
                filter_index=j,
            )
            expected = np.mean(
                [
                    class_score(forward(net=net, input=image), 2) - class_score(forward(net=zeroed, input=image), 2)
                    for image in images
                ]
            )
            self.assertAlmostEqual(float(expected), scores[j].delta, places=5)
            self.assertEqual(f"conv2/{j}", scores[j].target)
            self.assertEqual(3, len(scores[j].per_image_deltas))

    def test_sigma(self) -> None:
        scores = layer_discrim(
            net=toy_network(),
            images=_images(),
            class_index=0,
            layer="conv1",
            score_mode="logit",
            sigma_factor=0.5,
        )
        deltas = np.array([score.delta for score in scores])
        sigma = float(deltas.std())
        for score in scores:
            self.assertAlmostEqual(sigma, score.sigma or 0.0)
            self.assertEqual(score.delta > 0.5 * sigma, score.is_discriminative)

    def test_pool(self) -> None:
        serial = layer_discrim(
            net=toy_network(),
            images=_images(),
            class_index=1,
            layer="conv2",
        )
        with WorkerPool(workers=3) as pool:
            parallel = layer_discrim(
                net=toy_network(),
                images=_images(),
                class_index=1,
                layer="conv2",
                pool=pool,
            )
        self.assertEqual([score.delta for score in serial], [score.delta for score in parallel])

    def test_errors(self) -> None:
        with self.assertRaises(DiscrimError):
            layer_discrim(
                net=toy_network(),
                images=[],
                class_index=0,
                layer="conv2",
            )
        with self.assertRaises(NetworkConfigurationError):
            layer_discrim(
                net=toy_network(),
                images=_images(1),
                class_index=0,
                layer="pool1",
            )

    def test_filter_discrim(self) -> None:
        scores = layer_discrim(
            net=toy_network(),
            images=_images(),
            class_index=0,
            layer="conv2",
        )
        single = filter_discrim(
            net=toy_network(),
            images=_images(),
            class_index=0,
            layer="conv2",
            j=5,
        )
        self.assertEqual(scores[5], single)
        with self.assertRaises(NetworkConfigurationError):
            filter_discrim(
                net=toy_network(),
                images=_images(),
                class_index=0,
                layer="conv2",
                j=8,
            )


class TestPartDiscrim(unittest.TestCase):
    def test_blackout(self) -> None:
        net = toy_network()
        images = _images()
        masks = [_mask(2, 3, 8), None, _mask(10, 10, 6)]
        score = part_discrim(
            net=net,
            images=images,
            masks=masks,
            class_index=1,
            part_class="wheel",
        )
        expected = []
        for image, mask in ((images[0], masks[0]), (images[2], masks[2])):
            blacked = image.copy()
            blacked[:, mask] = 0
            base = class_score(forward(net=net, input=image), 1)
            expected.append(base - class_score(forward(net=net, input=blacked), 1))
        self.assertEqual("wheel", score.target)
        self.assertEqual(2, len(score.per_image_deltas))
        self.assertAlmostEqual(float(np.mean(expected)), score.delta, places=5)

    def test_empty_mask(self) -> None:
        score = part_discrim(
            net=toy_network(),
            images=_images(1),
            masks=[np.zeros((24, 24), dtype=bool)],
            class_index=0,
            part_class="eye",
        )
        self.assertEqual(0.0, score.delta)

    def test_blackout_ablation(self) -> None:
        net = toy_network()
        image = _images(1)[0]
        mask = _mask(0, 0, 24)
        result = forward(
            net=net,
            input=image,
            ablation=AblationSpec(blackout_mask=mask),
        )
        np.testing.assert_allclose(
            forward(net=net, input=np.zeros_like(image)).scores,
            result.scores,
            rtol=1e-6,
        )

    def test_errors(self) -> None:
        with self.assertRaises(DiscrimError):
            part_discrim(
                net=toy_network(),
                images=_images(2),
                masks=[None],
                class_index=0,
                part_class="eye",
            )
        with self.assertRaises(DiscrimError):
            part_discrim(
                net=toy_network(),
                images=_images(2),
                masks=[None, None],
                class_index=0,
                part_class="eye",
            )

    def test_object_parts(self) -> None:
        images = _images()
        scores = object_part_discrims(
            net=toy_network(),
            images=images,
            masks_by_part={
                "wheel": [_mask(0, 0, 8), _mask(4, 4, 8), None],
                "saddle": [None, None, None],
                "chain": [None, _mask(12, 2, 10), _mask(16, 16, 8)],
            },
            class_index=0,
        )
        self.assertEqual(["chain", "wheel"], [score.part_class for score in scores])
        deltas = np.array([score.delta for score in scores])
        self.assertTrue(all(score.sigma == float(deltas.std()) for score in scores))

    def test_table(self) -> None:
        scores = layer_discrim(
            net=toy_network(),
            images=_images(2),
            class_index=0,
            layer="conv1",
        )
        with tempfile.TemporaryDirectory() as directory:
            path = write_discrim_table(
                path=Path(directory) / "discrim.csv",
                rows=discrim_rows(
                    object_class="bicycle",
                    scores=scores,
                ),
            )
            rows = read_table(
                path=path,
                columns=DISCRIM_COLUMNS,
            )
        self.assertEqual(6, len(rows))
        self.assertEqual("conv1/0", rows[0]["target"])
        self.assertEqual(2, rows[0]["n_images"])
        self.assertEqual("bicycle", rows[5]["object_class"])
