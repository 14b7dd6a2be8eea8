"""Regression features and training pairs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import (
    List,
    Sequence,
    Tuple,
)

import numpy as np

from filtersem.core.geometry.box import Box
from filtersem.core.geometry.receptive_field import receptive_field
from filtersem.core.nn.spec import NetworkSpec
from filtersem.core.stimulus.activation import Activation


FEATURE_SIZE = 12
TARGET_NAMES = (
    "x",
    "y",
    "w",
    "h",
)


@dataclass(frozen=True)
class PartBox:
    """A ground-truth part instance, given by its center and size."""

    gx: float
    gy: float
    w: float
    h: float
    image_id: str
    part_class: str

    @classmethod
    def from_box(
        cls,
        box: Box,
        image_id: str,
        part_class: str,
    ) -> PartBox:
        """
        Create a part box from a corner box.

        Args:
            box: the box
            image_id: the image of the part
            part_class: the class of the part

        Returns:
            the part box
        """
        cx, cy = box.center
        return cls(
            gx=cx,
            gy=cy,
            w=box.w,
            h=box.h,
            image_id=image_id,
            part_class=part_class,
        )

    @property
    def box(self) -> Box:
        """
        Get the corner box.

        Returns:
            the box
        """
        return Box.from_center(
            cx=self.gx,
            cy=self.gy,
            w=self.w,
            h=self.h,
        )


@dataclass
class PairSet:
    """Training pairs as arrays: (n, 12) features, (n, 4) targets and (n,) weights."""

    features: np.ndarray
    targets: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    @classmethod
    def empty(cls) -> PairSet:
        """
        Create an empty set.

        Returns:
            the empty set
        """
        return cls(
            features=np.zeros((0, FEATURE_SIZE), dtype=np.float64),
            targets=np.zeros((0, 4), dtype=np.float64),
            weights=np.zeros(0, dtype=np.float64),
        )

    def take(
        self,
        indices: np.ndarray,
    ) -> PairSet:
        """
        Select a subset.

        Args:
            indices: integer indices or a boolean mask

        Returns:
            the subset
        """
        return PairSet(
            features=self.features[indices],
            targets=self.targets[indices],
            weights=self.weights[indices],
        )

    def scaled(
        self,
        factor: float,
    ) -> PairSet:
        """
        Multiply every pair weight.

        Args:
            factor: the factor

        Returns:
            the rescaled set
        """
        return PairSet(
            features=self.features,
            targets=self.targets,
            weights=self.weights * factor,
        )


def feature_matrix(
    centers: np.ndarray,
    neighborhoods: np.ndarray,
) -> np.ndarray:
    """
    Build the feature vectors (cx, cy, 3x3 neighborhood, 1).

    Args:
        centers: the (n, 2) receptive-field centers
        neighborhoods: the (n, 9) activation neighborhoods

    Returns:
        the (n, 12) features
    """
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    neighborhoods = np.asarray(neighborhoods, dtype=np.float64).reshape(-1, 9)
    return np.hstack(
        [
            centers,
            neighborhoods,
            np.ones((centers.shape[0], 1)),
        ]
    )


def match_containing(
    centers: np.ndarray,
    images: np.ndarray,
    gt_boxes: np.ndarray,
    gt_images: np.ndarray,
) -> np.ndarray:
    """
    Find, for every center, the smallest ground-truth box of its image containing it.

    Containment is half-open ; ties on area go to the first box.

    Args:
        centers: the (n, 2) centers
        images: the (n,) image index of every center
        gt_boxes: the (m, 4) ground-truth boxes
        gt_images: the (m,) image index of every box

    Returns:
        the (n,) index of the matched box, -1 when none contains the center
    """
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    images = np.asarray(images)
    gt_boxes = np.asarray(gt_boxes, dtype=np.float64).reshape(-1, 4)
    gt_images = np.asarray(gt_images)
    matched = np.full(centers.shape[0], -1, dtype=np.intp)
    if centers.shape[0] == 0 or gt_boxes.shape[0] == 0:
        return matched
    areas = gt_boxes[:, 2] * gt_boxes[:, 3]
    for image in np.intersect1d(images, gt_images):
        rows = np.flatnonzero(images == image)
        candidates = np.flatnonzero(gt_images == image)
        boxes = gt_boxes[candidates]
        px = centers[rows, 0:1]
        py = centers[rows, 1:2]
        inside = (
            (boxes[np.newaxis, :, 0] <= px)
            & (px < boxes[np.newaxis, :, 0] + boxes[np.newaxis, :, 2])
            & (boxes[np.newaxis, :, 1] <= py)
            & (py < boxes[np.newaxis, :, 1] + boxes[np.newaxis, :, 3])
        )
        masked = np.where(inside, areas[candidates][np.newaxis], np.inf)
        best = np.argmin(masked, axis=1)
        found = inside.any(axis=1)
        matched[rows[found]] = candidates[best[found]]
    return matched


def build_pairs(
    centers: np.ndarray,
    neighborhoods: np.ndarray,
    values: np.ndarray,
    images: np.ndarray,
    gt_boxes: np.ndarray,
    gt_images: np.ndarray,
) -> Tuple[PairSet, np.ndarray]:
    """
    Pair activations with the ground-truth box containing their receptive-field center.

    Args:
        centers: the (n, 2) clamped receptive-field centers
        neighborhoods: the (n, 9) neighborhoods
        values: the (n,) activation values, used as pair weights
        images: the (n,) image index of every activation
        gt_boxes: the (m, 4) ground-truth corner boxes
        gt_images: the (m,) image index of every box

    Returns:
        the pairs and, for each pair, the index of its activation
    """
    matched = match_containing(
        centers=centers,
        images=images,
        gt_boxes=gt_boxes,
        gt_images=gt_images,
    )
    selected = np.flatnonzero(matched >= 0)
    if selected.size == 0:
        return PairSet.empty(), selected
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)[selected]
    boxes = np.asarray(gt_boxes, dtype=np.float64).reshape(-1, 4)[matched[selected]]
    targets = np.stack(
        [
            boxes[:, 0] + boxes[:, 2] / 2 - centers[:, 0],
            boxes[:, 1] + boxes[:, 3] / 2 - centers[:, 1],
            boxes[:, 2],
            boxes[:, 3],
        ],
        axis=1,
    )
    return (
        PairSet(
            features=feature_matrix(
                centers=centers,
                neighborhoods=np.asarray(neighborhoods)[selected],
            ),
            targets=targets,
            weights=np.asarray(values, dtype=np.float64)[selected],
        ),
        selected,
    )


def collect_pairs(
    net: NetworkSpec,
    layer: str,
    activations: Sequence[Activation],
    gt_parts: Sequence[PartBox],
) -> PairSet:
    """
    Pair activations of a layer with the part instances containing their receptive-field center.

    An activation inside several instances of its image is paired with the smallest one only.

    Args:
        net: the network
        layer: the layer of the activations
        activations: the activations
        gt_parts: the ground-truth part instances

    Returns:
        the pairs, in activation order
    """
    if not activations:
        return PairSet.empty()
    image_ids: List[str] = sorted({act.image_id for act in activations} | {part.image_id for part in gt_parts})
    index = {image_id: i for i, image_id in enumerate(image_ids)}
    centers = np.array(
        [
            receptive_field(
                net=net,
                layer=layer,
                c=act.c,
                r=act.r,
            ).center
            for act in activations
        ]
    )
    pairs, _ = build_pairs(
        centers=centers,
        neighborhoods=np.array([act.neighborhood for act in activations]),
        values=np.array([act.value for act in activations]),
        images=np.array([index[act.image_id] for act in activations]),
        gt_boxes=np.array([part.box.as_list() for part in gt_parts]).reshape(-1, 4),
        gt_images=np.array([index[part.image_id] for part in gt_parts], dtype=np.intp),
    )
    return pairs
