"""Local maxima of feature maps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import (
    List,
    Tuple,
)

import numpy as np
from scipy.ndimage import maximum_filter


# 3x3 neighborhood, the center excluded
_FOOTPRINT = np.ones((3, 3), dtype=bool)
_FOOTPRINT[1, 1] = False


@dataclass(frozen=True)
class Activation:
    """
    A strict local maximum of a feature map.

    `neighborhood` holds the 3x3 values around (c, r) in row-major order, zero outside the map.
    """

    layer: str
    filter: int
    c: int
    r: int
    value: float
    neighborhood: Tuple[float, ...]
    image_id: str = ""


@dataclass
class ActivationArrays:
    """The local maxima of a stack of feature maps, as parallel arrays."""

    filters: np.ndarray
    cols: np.ndarray
    rows: np.ndarray
    values: np.ndarray
    neighborhoods: np.ndarray

    def __len__(self) -> int:
        return int(self.values.shape[0])

    @classmethod
    def empty(cls) -> ActivationArrays:
        """
        Create an empty set.

        Returns:
            the empty set
        """
        return cls(
            filters=np.zeros(0, dtype=np.intp),
            cols=np.zeros(0, dtype=np.intp),
            rows=np.zeros(0, dtype=np.intp),
            values=np.zeros(0, dtype=np.float64),
            neighborhoods=np.zeros((0, 9), dtype=np.float64),
        )

    def take(
        self,
        indices: np.ndarray,
    ) -> ActivationArrays:
        """
        Select a subset.

        Args:
            indices: integer indices or a boolean mask

        Returns:
            the subset
        """
        return ActivationArrays(
            filters=self.filters[indices],
            cols=self.cols[indices],
            rows=self.rows[indices],
            values=self.values[indices],
            neighborhoods=self.neighborhoods[indices],
        )

    def to_activations(
        self,
        layer: str,
        image_id: str = "",
    ) -> List[Activation]:
        """
        Convert to activation records.

        Args:
            layer: the layer of the maps
            image_id: the image the maps were computed on

        Returns:
            the activations, in array order
        """
        return [
            Activation(
                layer=layer,
                filter=int(self.filters[i]),
                c=int(self.cols[i]),
                r=int(self.rows[i]),
                value=float(self.values[i]),
                neighborhood=tuple(float(v) for v in self.neighborhoods[i]),
                image_id=image_id,
            )
            for i in range(len(self))
        ]


def find_maxima(
    maps: np.ndarray,
    min_value: float = 0.0,
) -> ActivationArrays:
    """
    Find the strict local maxima of every channel of a stack of feature maps.

    A position is a maximum when its value is strictly greater than each of its in-bounds 8 neighbors,
    than `min_value` and than 0.
    Results are sorted by filter, then by value descending, then in row-major order.

    Args:
        maps: a (filters, height, width) stack
        min_value: the activation floor

    Returns:
        the maxima
    """
    maps = np.asarray(maps, dtype=np.float64)
    if maps.ndim == 2:
        maps = maps[np.newaxis]
    neighbors = maximum_filter(
        maps,
        footprint=_FOOTPRINT[np.newaxis],
        mode="constant",
        cval=-np.inf,
    )
    peaks = (maps > neighbors) & (maps > max(min_value, 0.0))
    filters, rows, cols = np.nonzero(peaks)
    if filters.size == 0:
        return ActivationArrays.empty()
    values = maps[filters, rows, cols]
    order = np.lexsort((cols, rows, -values, filters))
    filters, rows, cols, values = filters[order], rows[order], cols[order], values[order]
    padded = np.pad(maps, ((0, 0), (1, 1), (1, 1)))
    offsets = np.arange(-1, 2)
    dr, dc = np.meshgrid(offsets, offsets, indexing="ij")
    neighborhoods = padded[
        filters[:, np.newaxis],
        rows[:, np.newaxis] + 1 + dr.ravel()[np.newaxis],
        cols[:, np.newaxis] + 1 + dc.ravel()[np.newaxis],
    ]
    return ActivationArrays(
        filters=filters.astype(np.intp),
        cols=cols.astype(np.intp),
        rows=rows.astype(np.intp),
        values=values,
        neighborhoods=neighborhoods,
    )


def local_maxima(
    feature_map: np.ndarray,
    min_value: float = 0.0,
    layer: str = "",
    filter_index: int = 0,
    image_id: str = "",
) -> List[Activation]:
    """
    Find the strict local maxima of a single feature map.

    Args:
        feature_map: a (height, width) map
        min_value: the activation floor
        layer: the layer the map belongs to
        filter_index: the filter the map belongs to
        image_id: the image the map was computed on

    Returns:
        the activations, by value descending then in row-major order
    """
    arrays = find_maxima(
        maps=np.asarray(feature_map)[np.newaxis],
        min_value=min_value,
    )
    arrays.filters[:] = filter_index
    return arrays.to_activations(
        layer=layer,
        image_id=image_id,
    )
