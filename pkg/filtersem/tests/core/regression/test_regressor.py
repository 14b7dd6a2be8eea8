import tempfile
import unittest
from pathlib import Path

import numpy as np

from filtersem.core.exceptions import DataError
from filtersem.core.geometry.box import Box
from filtersem.core.geometry.receptive_field import receptive_field
from filtersem.core.regression.bank import (
    load_bank,
    save_bank,
)
from filtersem.core.regression.error import (
    InsufficientPairsError,
    RegressorDimensionError,
)
from filtersem.core.regression.pairs import (
    FEATURE_SIZE,
    PairSet,
    feature_matrix,
)
from filtersem.core.regression.regressor import (
    PartRegressor,
    apply,
    fit,
    weighted_objective,
)
from filtersem.core.stimulus.activation import Activation
from filtersem.tests.networks import toy_network


def _noiseless_pairs(
    count: int = 60,
    seed: int = 0,
) -> tuple:
    rng = np.random.default_rng(seed)
    weights = rng.normal(size=(4, FEATURE_SIZE))
    features = feature_matrix(
        centers=rng.uniform(0, 48, (count, 2)),
        neighborhoods=rng.uniform(0, 3, (count, 9)),
    )
    return (
        PairSet(
            features=features,
            targets=features @ weights.T,
            weights=rng.uniform(0.1, 2.0, count),
        ),
        weights,
    )


class TestRegressor(unittest.TestCase):
    def test_noiseless_recovery(self) -> None:
        pairs, weights = _noiseless_pairs()
        regressor = fit(
            pairs=pairs,
            min_pairs=20,
            ridge=1e-10,
            part_class="wheel",
            layer="conv2",
            filter_index=3,
        )
        np.testing.assert_allclose(weights, regressor.weights, atol=1e-4)
        self.assertLess(weighted_objective(regressor.weights, pairs), 1e-8)
        self.assertEqual(60, regressor.count)
        self.assertEqual(("wheel", "conv2", 3), (regressor.part_class, regressor.layer, regressor.filter))
        np.testing.assert_array_equal(regressor.weights[2], regressor.w_w)

    def test_weight_scale_invariance(self) -> None:
        pairs, _ = _noiseless_pairs(seed=1)
        noisy = PairSet(
            features=pairs.features,
            targets=pairs.targets + np.random.default_rng(5).normal(size=pairs.targets.shape),
            weights=pairs.weights,
        )
        np.testing.assert_allclose(
            fit(noisy).weights,
            fit(noisy.scaled(1000.0)).weights,
            rtol=1e-6,
            atol=1e-9,
        )

    def test_fit_minimizes_objective(self) -> None:
        pairs, _ = _noiseless_pairs(seed=2)
        noisy = PairSet(
            features=pairs.features,
            targets=pairs.targets + np.random.default_rng(6).normal(size=pairs.targets.shape),
            weights=pairs.weights,
        )
        regressor = fit(noisy)
        best = weighted_objective(regressor.weights, noisy)
        rng = np.random.default_rng(7)
        for _ in range(5):
            moved = regressor.weights + rng.normal(scale=1e-2, size=regressor.weights.shape)
            self.assertGreater(weighted_objective(moved, noisy), best)

    def test_insufficient_pairs(self) -> None:
        pairs, _ = _noiseless_pairs(count=19)
        with self.assertRaises(InsufficientPairsError) as context:
            fit(
                pairs=pairs,
                min_pairs=20,
            )
        self.assertEqual(19, context.exception.count)
        self.assertEqual(20, context.exception.minimum)

    def test_no_pairs(self) -> None:
        with self.assertRaises(InsufficientPairsError):
            fit(
                pairs=PairSet.empty(),
                min_pairs=0,
            )

    def test_predict_dimension(self) -> None:
        regressor = PartRegressor(
            part_class="wheel",
            layer="conv2",
            filter=0,
            weights=np.zeros((4, FEATURE_SIZE)),
            count=20,
        )
        with self.assertRaises(RegressorDimensionError):
            regressor.predict(np.zeros((3, 5)))

    def test_apply(self) -> None:
        weights = np.zeros((4, FEATURE_SIZE))
        weights[0, -1] = 2.0
        weights[1, -1] = -1.0
        weights[2, -1] = 6.0
        weights[3, -1] = 0.25
        regressor = PartRegressor(
            part_class="wheel",
            layer="conv2",
            filter=1,
            weights=weights,
            count=20,
        )
        net = toy_network()
        activation = Activation("conv2", 1, 5, 3, 0.75, (0.0,) * 9, "a")
        detection = apply(
            reg=regressor,
            act=activation,
            rf=receptive_field(
                net=net,
                layer="conv2",
                c=5,
                r=3,
            ),
        )
        # center (11, 7) moved by (2, -1) ; height floored at 1
        self.assertEqual(Box(10.0, 5.5, 6.0, 1.0), detection.box)
        self.assertTrue(detection.regressed)
        self.assertEqual(0.75, detection.score)

    def test_apply_clips_to_image(self) -> None:
        weights = np.zeros((4, FEATURE_SIZE))
        weights[0, -1] = -30.0
        weights[2, -1] = 8.0
        weights[3, -1] = 8.0
        detection = apply(
            reg=PartRegressor("wheel", "conv2", 0, weights, 20),
            act=Activation("conv2", 0, 5, 3, 1.0, (0.0,) * 9, "a"),
            rf=receptive_field(
                net=toy_network(),
                layer="conv2",
                c=5,
                r=3,
            ),
        )
        self.assertEqual(0.0, detection.box.x)
        self.assertGreaterEqual(detection.box.w, 1.0)

    def test_bank(self) -> None:
        pairs, _ = _noiseless_pairs()
        regressors = [
            fit(
                pairs=pairs,
                part_class="wheel",
                layer="conv2",
                filter_index=j,
            )
            for j in (0, 4)
        ]
        with tempfile.TemporaryDirectory() as directory:
            path = save_bank(
                path=Path(directory) / "regressors" / "conv2.json",
                regressors=regressors,
            )
            loaded = load_bank(path)
        self.assertEqual([0, 4], [regressor.filter for regressor in loaded])
        np.testing.assert_allclose(regressors[1].weights, loaded[1].weights)
        self.assertEqual(60, loaded[0].count)

    def test_bank_malformed(self) -> None:
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "bank.json"
            path.write_text('[{"part_class": "wheel"}]', encoding="utf-8")
            with self.assertRaises(DataError):
                load_bank(path)
            path.write_text("{}", encoding="utf-8")
            with self.assertRaises(DataError):
                load_bank(path)
