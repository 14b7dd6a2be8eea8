"""Analytic receptive fields of feature-map positions."""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from filtersem.core.geometry.box import (
    Box,
    clip_boxes,
)
from filtersem.core.geometry.error import GeometryError
from filtersem.core.nn.spec import (
    ELEMENTWISE_KINDS,
    SPATIAL_KINDS,
    NetworkSpec,
)


@dataclass(frozen=True)
class LayerGeometry:
    """
    How a layer's positions project on the input.

    The receptive field of position c covers [c * stride + offset, c * stride + offset + size) on both axes.
    """

    size: int
    stride: int
    offset: int


@dataclass(frozen=True)
class ReceptiveField:
    """
    The input region of a feature-map position.

    `center` is clamped into the image ; `raw_center` is the midpoint of the unclipped region ;
    `image_size` is the (width, height) of the input.
    """

    center: Tuple[float, float]
    raw_center: Tuple[float, float]
    size: Tuple[float, float]
    offset: Tuple[float, float]
    clipped_box: Box
    image_size: Tuple[int, int]


def layer_geometry(
    net: NetworkSpec,
    layer: str,
) -> LayerGeometry:
    """
    Compose the receptive field rule from a layer down to the input.

    Going down through a conv or maxpool layer: size = (size - 1) * stride + kernel and
    offset = offset * stride - pad ; relu and lrn layers leave the field unchanged.

    Args:
        net: a network
        layer: a layer name

    Returns:
        the geometry of the layer

    Raises:
        GeometryError: if the layer has no spatial receptive field
    """
    index = net.layer_index(layer)
    size, stride, offset = 1, 1, 0
    for current in reversed(net.layers[: index + 1]):
        if current.kind in SPATIAL_KINDS:
            size = (size - 1) * current.stride + current.kernel
            offset = offset * current.stride - current.pad
            stride *= current.stride
        elif current.kind not in ELEMENTWISE_KINDS:
            raise GeometryError(f"Layer {repr(layer)} is not spatial: it sits after layer {repr(current.name)}")
    return LayerGeometry(
        size=size,
        stride=stride,
        offset=offset,
    )


def receptive_field(
    net: NetworkSpec,
    layer: str,
    c: int,
    r: int,
) -> ReceptiveField:
    """
    Get the receptive field of a feature-map position.

    Args:
        net: a network
        layer: a layer name
        c: the column of the position
        r: the row of the position

    Returns:
        the receptive field

    Raises:
        GeometryError: if the position lies outside the feature map
    """
    _, height, width = net.output_shape_of(layer)
    if not (0 <= c < width and 0 <= r < height):
        raise GeometryError(f"Position ({c}, {r}) outside the {width}x{height} map of layer {repr(layer)}")
    centers, raw_centers, boxes = receptive_field_arrays(
        net=net,
        layer=layer,
        cols=np.array([c]),
        rows=np.array([r]),
    )
    geometry = layer_geometry(net, layer)
    return ReceptiveField(
        center=(float(centers[0, 0]), float(centers[0, 1])),
        raw_center=(float(raw_centers[0, 0]), float(raw_centers[0, 1])),
        size=(float(geometry.size), float(geometry.size)),
        offset=(float(c * geometry.stride + geometry.offset), float(r * geometry.stride + geometry.offset)),
        clipped_box=Box.from_array(boxes[0]),
        image_size=(net.input_shape[2], net.input_shape[1]),
    )


def receptive_field_arrays(
    net: NetworkSpec,
    layer: str,
    cols: np.ndarray,
    rows: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Get the receptive fields of many positions of a layer.

    Args:
        net: a network
        layer: a layer name
        cols: the (n,) columns
        rows: the (n,) rows

    Returns:
        the (n, 2) clamped centers, the (n, 2) raw centers and the (n, 4) clipped boxes
    """
    geometry = layer_geometry(net, layer)
    _, image_height, image_width = net.input_shape
    left = np.asarray(cols, dtype=np.float64) * geometry.stride + geometry.offset
    top = np.asarray(rows, dtype=np.float64) * geometry.stride + geometry.offset
    raw_centers = np.stack([left + geometry.size / 2, top + geometry.size / 2], axis=1)
    centers = np.stack(
        [
            np.clip(raw_centers[:, 0], 0, image_width),
            np.clip(raw_centers[:, 1], 0, image_height),
        ],
        axis=1,
    )
    sizes = np.full(left.shape, float(geometry.size))
    boxes = clip_boxes(
        boxes=np.stack([left, top, sizes, sizes], axis=1),
        width=image_width,
        height=image_height,
    )
    return centers, raw_centers, boxes
