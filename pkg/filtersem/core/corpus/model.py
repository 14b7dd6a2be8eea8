"""Annotated images."""
from dataclasses import (
    dataclass,
    field,
)
from typing import (
    List,
    Tuple,
)

import numpy as np

from filtersem.core.corpus.error import CorpusError
from filtersem.core.geometry.box import (
    Box,
    mask_box,
)


@dataclass(frozen=True)
class ObjectAnnotation:
    """An object instance."""

    object_class: str
    box: Box


@dataclass
class PartAnnotation:
    """A part instance ; `mask` covers the whole image and `parent` indexes the objects of the image."""

    part_class: str
    parent: int
    box: Box
    mask: np.ndarray = field(repr=False)


@dataclass
class AnnotatedImage:
    """An RGB image as a (3, height, width) float32 tensor in [0, 1], with its objects and parts."""

    image_id: str
    image: np.ndarray = field(repr=False)
    objects: List[ObjectAnnotation] = field(default_factory=list)
    parts: List[PartAnnotation] = field(default_factory=list)

    @property
    def size(self) -> Tuple[int, int]:
        """
        Get the size of the image.

        Returns:
            the (width, height)
        """
        return int(self.image.shape[2]), int(self.image.shape[1])

    def parts_of(
        self,
        object_index: int,
    ) -> List[PartAnnotation]:
        """
        Get the parts of an object.

        Args:
            object_index: the object

        Returns:
            the parts, in annotation order
        """
        return [part for part in self.parts if part.parent == object_index]

    def validate(self) -> None:
        """
        Check the annotations against the image.

        Raises:
            CorpusError: if an annotation is inconsistent
        """
        if self.image.ndim != 3 or self.image.shape[0] != 3:
            raise CorpusError(f"Image {self.image_id}: expecting an RGB tensor ; got shape {self.image.shape}")
        width, height = self.size
        for index, obj in enumerate(self.objects):
            box = obj.box
            if not (box.w > 0 and box.h > 0 and box.x >= 0 and box.y >= 0):
                raise CorpusError(f"Image {self.image_id}: object {index} has an invalid box {box}")
            if box.x + box.w > width or box.y + box.h > height:
                raise CorpusError(f"Image {self.image_id}: object {index} box {box} exceeds the image")
        for index, part in enumerate(self.parts):
            if not 0 <= part.parent < len(self.objects):
                raise CorpusError(f"Image {self.image_id}: part {index} references missing object {part.parent}")
            if part.mask.shape != (height, width):
                raise CorpusError(f"Image {self.image_id}: part {index} mask has shape {part.mask.shape}")
            if part.mask.any() and mask_box(part.mask) != part.box:
                raise CorpusError(f"Image {self.image_id}: part {index} box {part.box} does not bound its mask")


def to_uint8(
    image: np.ndarray,
) -> np.ndarray:
    """
    Quantize a [0, 1] tensor to 8-bit values.

    Args:
        image: a (3, height, width) float tensor

    Returns:
        the (height, width, 3) uint8 array
    """
    return np.round(np.clip(image, 0.0, 1.0) * 255).astype(np.uint8).transpose(1, 2, 0)


def from_uint8(
    pixels: np.ndarray,
) -> np.ndarray:
    """
    Convert 8-bit pixels to a [0, 1] tensor.

    Args:
        pixels: a (height, width, 3) uint8 array

    Returns:
        the (3, height, width) float32 tensor
    """
    return (np.asarray(pixels, dtype=np.float32) / np.float32(255)).transpose(2, 0, 1).copy()
