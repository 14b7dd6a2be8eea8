"""Weighted least-squares part regressors."""
from dataclasses import (
    dataclass,
    field,
)
from typing import Tuple

import numpy as np

from filtersem.core.geometry.box import (
    Box,
    clip_boxes,
)
from filtersem.core.geometry.receptive_field import ReceptiveField
from filtersem.core.regression.error import (
    InsufficientPairsError,
    RegressionNumericError,
    RegressorDimensionError,
)
from filtersem.core.regression.pairs import (
    FEATURE_SIZE,
    PairSet,
    feature_matrix,
)
from filtersem.core.stimulus.activation import Activation
from filtersem.core.stimulus.detection import StimulusDetection


@dataclass(frozen=True)
class PartRegressor:
    """
    Four linear models predicting (dx, dy, w, h) from the features of an activation.

    `weights` rows are the x, y, w and h models.
    """

    part_class: str
    layer: str
    filter: int
    weights: np.ndarray = field(repr=False)
    count: int

    @property
    def w_x(self) -> np.ndarray:
        """
        Get the model of the horizontal offset.

        Returns:
            the weights
        """
        return self.weights[0]

    @property
    def w_y(self) -> np.ndarray:
        """
        Get the model of the vertical offset.

        Returns:
            the weights
        """
        return self.weights[1]

    @property
    def w_w(self) -> np.ndarray:
        """
        Get the model of the width.

        Returns:
            the weights
        """
        return self.weights[2]

    @property
    def w_h(self) -> np.ndarray:
        """
        Get the model of the height.

        Returns:
            the weights
        """
        return self.weights[3]

    def predict(
        self,
        features: np.ndarray,
    ) -> np.ndarray:
        """
        Predict (dx, dy, w, h) for feature vectors.

        Args:
            features: the (n, 12) features

        Returns:
            the (n, 4) predictions

        Raises:
            RegressorDimensionError: if the features do not have the trained dimension
        """
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != self.weights.shape[1]:
            raise RegressorDimensionError(
                f"Regressor of {self.layer}/{self.filter} expects {self.weights.shape[1]} features, "
                + f"got shape {features.shape}"
            )
        return features @ self.weights.T

    def boxes(
        self,
        centers: np.ndarray,
        neighborhoods: np.ndarray,
        image_size: Tuple[int, int],
    ) -> np.ndarray:
        """
        Regress boxes for activations.

        The box center is the receptive-field center moved by (dx, dy) ; width and height are at least 1 ;
        boxes are clipped to the image.

        Args:
            centers: the (n, 2) clamped receptive-field centers
            neighborhoods: the (n, 9) neighborhoods
            image_size: the (width, height) of the image

        Returns:
            the (n, 4) corner boxes
        """
        centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
        predictions = self.predict(
            feature_matrix(
                centers=centers,
                neighborhoods=neighborhoods,
            )
        )
        widths = np.maximum(predictions[:, 2], 1.0)
        heights = np.maximum(predictions[:, 3], 1.0)
        boxes = np.stack(
            [
                centers[:, 0] + predictions[:, 0] - widths / 2,
                centers[:, 1] + predictions[:, 1] - heights / 2,
                widths,
                heights,
            ],
            axis=1,
        )
        return clip_boxes(
            boxes=boxes,
            width=image_size[0],
            height=image_size[1],
        )


def weighted_objective(
    weights: np.ndarray,
    pairs: PairSet,
) -> float:
    """
    Get the weighted squared error of a regressor over pairs, pair weights normalized to sum 1.

    Args:
        weights: the (4, 12) regressor weights
        pairs: the pairs

    Returns:
        the objective
    """
    normalized = pairs.weights / pairs.weights.sum()
    residuals = pairs.targets - pairs.features @ np.asarray(weights).T
    return float(np.sum(normalized[:, np.newaxis] * residuals**2))


def fit(
    pairs: PairSet,
    min_pairs: int = 20,
    ridge: float = 1e-6,
    part_class: str = "",
    layer: str = "",
    filter_index: int = 0,
) -> PartRegressor:
    """
    Fit the four regressors of a (filter, part class).

    Each solves min_w sum_k a_k (t_k - w . f_k)^2 + ridge |w|^2 with the pair weights a_k normalized to sum 1,
    so rescaling every weight leaves the solution unchanged.

    Args:
        pairs: the training pairs
        min_pairs: the number of pairs below which no regressor is fit
        ridge: the ridge penalty
        part_class: the part class
        layer: the layer of the filter
        filter_index: the filter

    Returns:
        the regressor

    Raises:
        InsufficientPairsError: if there are fewer than `min_pairs` pairs
        RegressionNumericError: if the solution is not finite
    """
    count = len(pairs)
    if count < min_pairs or count == 0:
        raise InsufficientPairsError(
            count=count,
            minimum=max(min_pairs, 1),
        )
    total = pairs.weights.sum()
    if not np.isfinite(total) or total <= 0:
        raise RegressionNumericError(f"Pair weights of {layer}/{filter_index} do not sum to a positive value")
    normalized = pairs.weights / total
    weighted_features = pairs.features.T * normalized[np.newaxis]
    lhs = weighted_features @ pairs.features + ridge * np.eye(pairs.features.shape[1])
    rhs = weighted_features @ pairs.targets
    try:
        solution = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError:
        solution, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    if not np.isfinite(solution).all():
        raise RegressionNumericError(f"Non-finite regressor weights for {layer}/{filter_index}")
    return PartRegressor(
        part_class=part_class,
        layer=layer,
        filter=filter_index,
        weights=solution.T.copy(),
        count=count,
    )


def apply(
    reg: PartRegressor,
    act: Activation,
    rf: ReceptiveField,
) -> StimulusDetection:
    """
    Turn an activation into a regressed detection.

    Args:
        reg: the regressor of the activation's filter
        act: the activation
        rf: the receptive field of the activation

    Returns:
        the detection

    Raises:
        RegressorDimensionError: if the regressor does not take 12 features
    """
    if reg.weights.shape != (4, FEATURE_SIZE):
        raise RegressorDimensionError(
            f"Regressor weights have shape {reg.weights.shape} ; expecting (4, {FEATURE_SIZE})"
        )
    boxes = reg.boxes(
        centers=np.array([rf.center]),
        neighborhoods=np.array([act.neighborhood]),
        image_size=rf.image_size,
    )
    return StimulusDetection(
        image_id=act.image_id,
        filter=(act.layer, act.filter),
        box=Box.from_array(boxes[0]),
        score=act.value,
        regressed=True,
    )
