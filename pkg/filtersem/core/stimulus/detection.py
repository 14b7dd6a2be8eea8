"""Stimulus detections: scored image boxes induced by activations."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import (
    List,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.geometry.box import Box
from filtersem.core.geometry.receptive_field import (
    receptive_field,
    receptive_field_arrays,
)
from filtersem.core.nn.spec import NetworkSpec
from filtersem.core.stimulus.activation import (
    Activation,
    ActivationArrays,
)
from filtersem.core.table import write_table


DETECTION_COLUMNS = (
    "image_id",
    "layer",
    "filter",
    "x",
    "y",
    "w",
    "h",
    "score",
    "regressed",
)


@dataclass(frozen=True)
class StimulusDetection:
    """A scored box ; the score is the value of the source activation."""

    image_id: str
    filter: Tuple[str, int]
    box: Box
    score: float
    regressed: bool


def raw_detection(
    act: Activation,
    net: NetworkSpec,
    layer: str,
) -> StimulusDetection:
    """
    Get the detection made of the clipped receptive field of an activation.

    Args:
        act: an activation of the layer
        net: the network
        layer: the layer of the activation

    Returns:
        the detection
    """
    field = receptive_field(
        net=net,
        layer=layer,
        c=act.c,
        r=act.r,
    )
    return StimulusDetection(
        image_id=act.image_id,
        filter=(layer, act.filter),
        box=field.clipped_box,
        score=act.value,
        regressed=False,
    )


@dataclass
class Detections:
    """
    Detections of one layer as parallel arrays.

    `images` indexes an external list of image ids ; `filters` are filter indices within the layer.
    """

    images: np.ndarray
    boxes: np.ndarray
    scores: np.ndarray
    filters: np.ndarray
    regressed: np.ndarray

    def __len__(self) -> int:
        return int(self.scores.shape[0])

    @classmethod
    def empty(cls) -> Detections:
        """
        Create an empty set.

        Returns:
            the empty set
        """
        return cls(
            images=np.zeros(0, dtype=np.intp),
            boxes=np.zeros((0, 4), dtype=np.float64),
            scores=np.zeros(0, dtype=np.float64),
            filters=np.zeros(0, dtype=np.intp),
            regressed=np.zeros(0, dtype=bool),
        )

    @classmethod
    def concat(
        cls,
        parts: Sequence[Detections],
    ) -> Detections:
        """
        Concatenate sets, keeping their order.

        Args:
            parts: the sets

        Returns:
            the concatenation
        """
        if not parts:
            return cls.empty()
        return cls(
            images=np.concatenate([part.images for part in parts]),
            boxes=np.concatenate([part.boxes for part in parts]).reshape(-1, 4),
            scores=np.concatenate([part.scores for part in parts]),
            filters=np.concatenate([part.filters for part in parts]),
            regressed=np.concatenate([part.regressed for part in parts]),
        )

    def take(
        self,
        indices: np.ndarray,
    ) -> Detections:
        """
        Select a subset.

        Args:
            indices: integer indices or a boolean mask

        Returns:
            the subset
        """
        return Detections(
            images=self.images[indices],
            boxes=self.boxes[indices],
            scores=self.scores[indices],
            filters=self.filters[indices],
            regressed=self.regressed[indices],
        )

    def to_detections(
        self,
        layer: str,
        image_ids: Sequence[str],
    ) -> List[StimulusDetection]:
        """
        Convert to detection records.

        Args:
            layer: the layer of the filters
            image_ids: the image ids indexed by `images`

        Returns:
            the detections, in array order
        """
        return [
            StimulusDetection(
                image_id=image_ids[int(self.images[i])],
                filter=(layer, int(self.filters[i])),
                box=Box.from_array(self.boxes[i]),
                score=float(self.scores[i]),
                regressed=bool(self.regressed[i]),
            )
            for i in range(len(self))
        ]


def raw_detections(
    net: NetworkSpec,
    layer: str,
    activations: ActivationArrays,
    image: int,
) -> Detections:
    """
    Get the receptive-field detections of activations of one image.

    Args:
        net: the network
        layer: the layer of the activations
        activations: the activations
        image: the image index

    Returns:
        the detections
    """
    _, _, boxes = receptive_field_arrays(
        net=net,
        layer=layer,
        cols=activations.cols,
        rows=activations.rows,
    )
    return Detections(
        images=np.full(len(activations), image, dtype=np.intp),
        boxes=boxes,
        scores=activations.values.astype(np.float64),
        filters=activations.filters.copy(),
        regressed=np.zeros(len(activations), dtype=bool),
    )


def write_detections(
    path: Path,
    layer: str,
    detections: Detections,
    image_ids: Sequence[str],
) -> Path:
    """
    Write detections as CSV.

    Args:
        path: the destination file
        layer: the layer of the filters
        detections: the detections
        image_ids: the image ids indexed by the detections

    Returns:
        the path of the written file
    """
    rows = (
        {
            "image_id": image_ids[int(detections.images[i])],
            "layer": layer,
            "filter": int(detections.filters[i]),
            "x": float(detections.boxes[i, 0]),
            "y": float(detections.boxes[i, 1]),
            "w": float(detections.boxes[i, 2]),
            "h": float(detections.boxes[i, 3]),
            "score": float(detections.scores[i]),
            "regressed": bool(detections.regressed[i]),
        }
        for i in range(len(detections))
    )
    return write_table(
        path=path,
        rows=rows,
        columns=DETECTION_COLUMNS,
    )
