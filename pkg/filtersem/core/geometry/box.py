"""Half-open axis-aligned boxes, single and vectorized."""
from __future__ import annotations

from dataclasses import dataclass
from typing import (
    List,
    Tuple,
)

import numpy as np


@dataclass(frozen=True)
class Box:
    """A box covering [x, x + w) x [y, y + h) in continuous pixel coordinates (pixel i spans [i, i + 1))."""

    x: float
    y: float
    w: float
    h: float

    @classmethod
    def from_center(
        cls,
        cx: float,
        cy: float,
        w: float,
        h: float,
    ) -> Box:
        """
        Create a box from its center and size.

        Args:
            cx: the horizontal center
            cy: the vertical center
            w: the width
            h: the height

        Returns:
            the box
        """
        return cls(
            x=cx - w / 2,
            y=cy - h / 2,
            w=w,
            h=h,
        )

    @classmethod
    def from_array(
        cls,
        values: np.ndarray,
    ) -> Box:
        """
        Create a box from an (x, y, w, h) array.

        Args:
            values: the coordinates

        Returns:
            the box
        """
        return cls(*(float(value) for value in values))

    @property
    def area(self) -> float:
        """
        Get the area.

        Returns:
            w * h
        """
        return self.w * self.h

    @property
    def center(self) -> Tuple[float, float]:
        """
        Get the center.

        Returns:
            the (x, y) center
        """
        return self.x + self.w / 2, self.y + self.h / 2

    def contains(
        self,
        px: float,
        py: float,
    ) -> bool:
        """
        Check whether a point lies in the box, upper edges excluded.

        Args:
            px: the horizontal coordinate
            py: the vertical coordinate

        Returns:
            True if the point is inside
        """
        return self.x <= px < self.x + self.w and self.y <= py < self.y + self.h

    def clip(
        self,
        width: float,
        height: float,
    ) -> Box:
        """
        Intersect the box with the image bounds, keeping at least one pixel per side.

        Args:
            width: the image width
            height: the image height

        Returns:
            the clipped box
        """
        clipped = clip_boxes(
            boxes=self.as_array()[np.newaxis],
            width=width,
            height=height,
        )
        return Box.from_array(clipped[0])

    def as_array(self) -> np.ndarray:
        """
        Get the box as an (x, y, w, h) array.

        Returns:
            the float64 array
        """
        return np.array([self.x, self.y, self.w, self.h], dtype=np.float64)

    def as_list(self) -> List[float]:
        """
        Get the box as an [x, y, w, h] list.

        Returns:
            the list
        """
        return [self.x, self.y, self.w, self.h]


def clip_boxes(
    boxes: np.ndarray,
    width: float,
    height: float,
) -> np.ndarray:
    """
    Intersect (x, y, w, h) boxes with the image bounds, keeping at least one pixel per side.

    Args:
        boxes: an (n, 4) array
        width: the image width
        height: the image height

    Returns:
        the clipped (n, 4) array
    """
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    x1 = np.clip(boxes[:, 0], 0, width)
    y1 = np.clip(boxes[:, 1], 0, height)
    x2 = np.clip(boxes[:, 0] + boxes[:, 2], 0, width)
    y2 = np.clip(boxes[:, 1] + boxes[:, 3], 0, height)
    x1 = np.minimum(x1, max(width - 1, 0))
    y1 = np.minimum(y1, max(height - 1, 0))
    x2 = np.maximum(x2, x1 + 1)
    y2 = np.maximum(y2, y1 + 1)
    return np.stack([x1, y1, x2 - x1, y2 - y1], axis=1)


def box_areas(
    boxes: np.ndarray,
) -> np.ndarray:
    """
    Get the areas of (x, y, w, h) boxes.

    Args:
        boxes: an (n, 4) array

    Returns:
        the (n,) areas
    """
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    return boxes[:, 2] * boxes[:, 3]


def pairwise_iou(
    a: np.ndarray,
    b: np.ndarray,
) -> np.ndarray:
    """
    Get the intersection-over-union of every pair of boxes.

    Boxes must have a positive area.

    Args:
        a: an (n, 4) array of (x, y, w, h) boxes
        b: an (m, 4) array of (x, y, w, h) boxes

    Returns:
        the (n, m) IoU matrix
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1, 4)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 4)
    left = np.maximum(a[:, np.newaxis, 0], b[np.newaxis, :, 0])
    top = np.maximum(a[:, np.newaxis, 1], b[np.newaxis, :, 1])
    right = np.minimum(a[:, np.newaxis, 0] + a[:, np.newaxis, 2], b[np.newaxis, :, 0] + b[np.newaxis, :, 2])
    bottom = np.minimum(a[:, np.newaxis, 1] + a[:, np.newaxis, 3], b[np.newaxis, :, 1] + b[np.newaxis, :, 3])
    intersection = np.clip(right - left, 0, None) * np.clip(bottom - top, 0, None)
    union = box_areas(a)[:, np.newaxis] + box_areas(b)[np.newaxis, :] - intersection
    return intersection / union


def rowwise_iou(
    a: np.ndarray,
    b: np.ndarray,
) -> np.ndarray:
    """
    Get the intersection-over-union of boxes paired row by row (broadcasting on leading axes).

    Args:
        a: an (..., 4) array of (x, y, w, h) boxes
        b: an (..., 4) array of (x, y, w, h) boxes

    Returns:
        the IoU array
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    left = np.maximum(a[..., 0], b[..., 0])
    top = np.maximum(a[..., 1], b[..., 1])
    right = np.minimum(a[..., 0] + a[..., 2], b[..., 0] + b[..., 2])
    bottom = np.minimum(a[..., 1] + a[..., 3], b[..., 1] + b[..., 3])
    intersection = np.clip(right - left, 0, None) * np.clip(bottom - top, 0, None)
    union = a[..., 2] * a[..., 3] + b[..., 2] * b[..., 3] - intersection
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(union > 0, intersection / np.where(union > 0, union, 1), 0.0)


def mask_box(
    mask: np.ndarray,
) -> Box:
    """
    Get the tight half-open box of a binary mask.

    Args:
        mask: a (height, width) boolean mask with at least one set pixel

    Returns:
        the box
    """
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    return Box(
        x=float(cols[0]),
        y=float(rows[0]),
        w=float(cols[-1] - cols[0] + 1),
        h=float(rows[-1] - rows[0] + 1),
    )
