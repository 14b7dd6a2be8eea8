"""Object crops: context padding and warping to the network input size."""
from __future__ import annotations

from dataclasses import (
    dataclass,
    field,
)
from typing import (
    List,
    Optional,
    Tuple,
)

import numpy as np
from scipy.ndimage import map_coordinates

from filtersem.core.corpus.error import CorpusError
from filtersem.core.corpus.model import AnnotatedImage
from filtersem.core.geometry.box import Box


@dataclass(frozen=True)
class CropSpec:
    """
    How objects are cropped.

    The object box is grown on every side by `absolute_pad` source pixels when set, else by `context_pad` times its
    width (horizontally) and height (vertically), then warped to `target_size` (width, height).
    """

    context_pad: float = 0.1
    target_size: Tuple[int, int] = (227, 227)
    absolute_pad: Optional[float] = None

    def __post_init__(self) -> None:
        """
        Check the crop parameters.

        Raises:
            CorpusError: if a padding is negative or the target is empty
        """
        if self.context_pad < 0 or (self.absolute_pad is not None and self.absolute_pad < 0):
            raise CorpusError("Crop padding must be non-negative")
        if self.target_size[0] < 1 or self.target_size[1] < 1:
            raise CorpusError(f"Invalid crop target size {self.target_size}")


@dataclass(frozen=True)
class CropTransform:
    """The axis-aligned affine map x' = sx * x + tx, y' = sy * y + ty from source to crop coordinates."""

    sx: float
    sy: float
    tx: float
    ty: float

    def map_point(
        self,
        x: float,
        y: float,
    ) -> Tuple[float, float]:
        """
        Map a point.

        Args:
            x: the horizontal coordinate
            y: the vertical coordinate

        Returns:
            the mapped point
        """
        return self.sx * x + self.tx, self.sy * y + self.ty

    def map_box(
        self,
        box: Box,
    ) -> Box:
        """
        Map a box.

        Args:
            box: the box

        Returns:
            the mapped box
        """
        x, y = self.map_point(box.x, box.y)
        return Box(
            x=x,
            y=y,
            w=self.sx * box.w,
            h=self.sy * box.h,
        )

    def inverse(self) -> CropTransform:
        """
        Get the inverse map.

        Returns:
            the map from crop to source coordinates
        """
        return CropTransform(
            sx=1.0 / self.sx,
            sy=1.0 / self.sy,
            tx=-self.tx / self.sx,
            ty=-self.ty / self.sy,
        )

    def then(
        self,
        other: CropTransform,
    ) -> CropTransform:
        """
        Compose with a map applied afterwards.

        Args:
            other: the map applied to the output of this one

        Returns:
            the composition
        """
        return CropTransform(
            sx=other.sx * self.sx,
            sy=other.sy * self.sy,
            tx=other.sx * self.tx + other.tx,
            ty=other.sy * self.ty + other.ty,
        )


def padded_region(
    box: Box,
    spec: CropSpec,
) -> Box:
    """
    Grow an object box by the context padding.

    Args:
        box: the object box
        spec: the crop specification

    Returns:
        the region to warp ; it may extend beyond the image
    """
    pad_x = spec.absolute_pad if spec.absolute_pad is not None else spec.context_pad * box.w
    pad_y = spec.absolute_pad if spec.absolute_pad is not None else spec.context_pad * box.h
    return Box(
        x=box.x - pad_x,
        y=box.y - pad_y,
        w=box.w + 2 * pad_x,
        h=box.h + 2 * pad_y,
    )


def _sample_grid(
    transform: CropTransform,
    target_size: Tuple[int, int],
) -> Tuple[np.ndarray, np.ndarray]:
    inverse = transform.inverse()
    # pixel centers of the crop mapped back to source array indices
    xs = inverse.sx * (np.arange(target_size[0]) + 0.5) + inverse.tx - 0.5
    ys = inverse.sy * (np.arange(target_size[1]) + 0.5) + inverse.ty - 0.5
    return np.meshgrid(ys, xs, indexing="ij")


def warp_plane(
    plane: np.ndarray,
    transform: CropTransform,
    target_size: Tuple[int, int],
    order: int = 1,
) -> np.ndarray:
    """
    Resample a 2-D array into crop coordinates ; samples outside the source are 0.

    Args:
        plane: the (height, width) source
        transform: the source-to-crop map
        target_size: the (width, height) of the crop
        order: the spline order, 1 for bilinear and 0 for nearest

    Returns:
        the (target height, target width) crop
    """
    rows, cols = _sample_grid(
        transform=transform,
        target_size=target_size,
    )
    return map_coordinates(
        np.asarray(plane, dtype=np.float64),
        [rows, cols],
        order=order,
        mode="constant",
        cval=0.0,
    )


def crop_and_warp(
    img: AnnotatedImage,
    object_index: int,
    spec: CropSpec,
) -> Tuple[np.ndarray, CropTransform]:
    """
    Crop an object with its context and warp it bilinearly to the target size.

    Args:
        img: the annotated image
        object_index: the object
        spec: the crop specification

    Returns:
        the (3, target height, target width) float32 crop and the source-to-crop map

    Raises:
        CorpusError: if the object does not exist or its box is degenerate
    """
    if not 0 <= object_index < len(img.objects):
        raise CorpusError(f"Image {img.image_id} has no object {object_index}")
    box = img.objects[object_index].box
    if not (box.w > 0 and box.h > 0):
        raise CorpusError(f"Image {img.image_id}: object {object_index} has a degenerate box {box}")
    region = padded_region(
        box=box,
        spec=spec,
    )
    sx = spec.target_size[0] / region.w
    sy = spec.target_size[1] / region.h
    transform = CropTransform(
        sx=sx,
        sy=sy,
        tx=-sx * region.x,
        ty=-sy * region.y,
    )
    crop = np.stack(
        [
            warp_plane(
                plane=channel,
                transform=transform,
                target_size=spec.target_size,
            )
            for channel in img.image
        ]
    )
    return crop.astype(np.float32), transform


@dataclass
class CropPart:
    """A part instance in crop coordinates ; `mask` covers the crop."""

    part_class: str
    box: Box
    mask: np.ndarray = field(repr=False)


@dataclass
class ObjectCrop:
    """A warped object crop and its parts."""

    image_id: str
    object_index: int
    object_class: str
    tensor: np.ndarray = field(repr=False)
    transform: CropTransform
    parts: List[CropPart] = field(default_factory=list)

    @property
    def crop_id(self) -> str:
        """
        Get the id of the crop.

        Returns:
            the image id and the object index
        """
        return f"{self.image_id}#{self.object_index}"


def crop_object(
    img: AnnotatedImage,
    object_index: int,
    spec: CropSpec,
) -> ObjectCrop:
    """
    Crop an object and map its parts into the crop.

    Part boxes are mapped through the transform and clipped to the crop ; masks are resampled with nearest
    neighbors.

    Args:
        img: the annotated image
        object_index: the object
        spec: the crop specification

    Returns:
        the crop
    """
    tensor, transform = crop_and_warp(
        img=img,
        object_index=object_index,
        spec=spec,
    )
    width, height = spec.target_size
    parts = []
    for part in img.parts_of(object_index):
        mask = (
            warp_plane(
                plane=part.mask,
                transform=transform,
                target_size=spec.target_size,
                order=0,
            )
            > 0.5
        )
        box = transform.map_box(part.box).clip(width, height)
        parts.append(
            CropPart(
                part_class=part.part_class,
                box=box,
                mask=mask,
            )
        )
    return ObjectCrop(
        image_id=img.image_id,
        object_index=object_index,
        object_class=img.objects[object_index].object_class,
        tensor=tensor,
        transform=transform,
        parts=parts,
    )
