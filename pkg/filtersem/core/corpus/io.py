"""Corpus files: one binary PPM image and one JSON annotation file per image."""
import json
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
)

import numpy as np
from PIL import (
    Image,
    UnidentifiedImageError,
)

from filtersem.core.corpus.error import CorpusError
from filtersem.core.corpus.model import (
    AnnotatedImage,
    ObjectAnnotation,
    PartAnnotation,
    from_uint8,
    to_uint8,
)
from filtersem.core.corpus.rle import (
    decode_mask,
    encode_mask,
)
from filtersem.core.geometry.box import Box
from filtersem.core.pool import WorkerPool


IMAGE_SUFFIX = ".ppm"
ANNOTATION_SUFFIX = ".json"
RESERVED_STEMS = (
    "manifest",
    "catalog",
)


def save_image(
    path: Path,
    image: np.ndarray,
) -> Path:
    """
    Write a [0, 1] RGB tensor as a binary PPM.

    Args:
        path: the destination file
        image: a (3, height, width) tensor

    Returns:
        the path of the written file
    """
    Image.fromarray(to_uint8(image)).save(path, format="PPM")
    return path


def load_image(
    path: Path,
) -> np.ndarray:
    """
    Read an image as a [0, 1] RGB tensor.

    Args:
        path: the file

    Returns:
        the (3, height, width) float32 tensor

    Raises:
        CorpusError: if the file cannot be read
    """
    try:
        with Image.open(path) as image:
            pixels = np.asarray(image.convert("RGB"))
    except (OSError, UnidentifiedImageError) as e:
        raise CorpusError(f"Unable to read image {path}") from e
    return from_uint8(pixels)


def annotation_to_dict(
    image: AnnotatedImage,
) -> Dict[str, Any]:
    """
    Convert the annotations of an image to their JSON form.

    Args:
        image: the image

    Returns:
        the JSON-compatible annotations
    """
    return {
        "objects": [
            {
                "class": obj.object_class,
                "box": obj.box.as_list(),
            }
            for obj in image.objects
        ],
        "parts": [
            {
                "part_class": part.part_class,
                "parent": part.parent,
                "box": part.box.as_list(),
                "mask_rle": encode_mask(part.mask),
            }
            for part in image.parts
        ],
    }


def annotation_from_dict(
    image_id: str,
    image: np.ndarray,
    data: Dict[str, Any],
) -> AnnotatedImage:
    """
    Build an annotated image from JSON annotations.

    Args:
        image_id: the image id
        image: the (3, height, width) tensor
        data: the JSON annotations

    Returns:
        the validated annotated image

    Raises:
        CorpusError: if the annotations are malformed
    """
    height, width = image.shape[1:]
    try:
        objects = [
            ObjectAnnotation(
                object_class=str(entry["class"]),
                box=Box(*(float(value) for value in entry["box"])),
            )
            for entry in data.get("objects", [])
        ]
        parts = [
            PartAnnotation(
                part_class=str(entry["part_class"]),
                parent=int(entry["parent"]),
                box=Box(*(float(value) for value in entry["box"])),
                mask=decode_mask(
                    runs=entry["mask_rle"],
                    shape=(height, width),
                ),
            )
            for entry in data.get("parts", [])
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise CorpusError(f"Malformed annotations for image {image_id}") from e
    annotated = AnnotatedImage(
        image_id=image_id,
        image=image,
        objects=objects,
        parts=parts,
    )
    annotated.validate()
    return annotated


def save_annotated(
    directory: Path,
    image: AnnotatedImage,
) -> None:
    """
    Write an annotated image.

    Args:
        directory: the corpus directory
        image: the image
    """
    save_image(
        path=directory / f"{image.image_id}{IMAGE_SUFFIX}",
        image=image.image,
    )
    (directory / f"{image.image_id}{ANNOTATION_SUFFIX}").write_text(
        json.dumps(
            annotation_to_dict(image),
            separators=(",", ":"),
        )
        + "\n",
        encoding="utf-8",
    )


def save_corpus(
    directory: Path,
    images: Sequence[AnnotatedImage],
) -> None:
    """
    Write annotated images.

    Args:
        directory: the corpus directory ; created when missing
        images: the images
    """
    directory.mkdir(
        parents=True,
        exist_ok=True,
    )
    for image in images:
        save_annotated(
            directory=directory,
            image=image,
        )


def load_annotated(
    path: Path,
) -> AnnotatedImage:
    """
    Read an annotated image from its annotation file.

    Args:
        path: the JSON annotation file ; the image has the same stem

    Returns:
        the annotated image

    Raises:
        CorpusError: if a file is missing or malformed
    """
    image_path = path.with_suffix(IMAGE_SUFFIX)
    if not image_path.is_file():
        raise CorpusError(f"Missing image {image_path} for annotations {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise CorpusError(f"Unable to read annotations {path}") from e
    if not isinstance(data, dict):
        raise CorpusError(f"Annotations {path} are not a JSON object")
    return annotation_from_dict(
        image_id=path.stem,
        image=load_image(image_path),
        data=data,
    )


def load_corpus(
    directory: Path,
    pool: Optional[WorkerPool] = None,
) -> List[AnnotatedImage]:
    """
    Read every annotated image of a corpus directory.

    Args:
        directory: the corpus directory
        pool: a pool reading images in parallel

    Returns:
        the images, sorted by id

    Raises:
        CorpusError: if the directory is missing or a file is malformed
    """
    if not directory.is_dir():
        raise CorpusError(f"Corpus directory {directory} does not exist")
    paths = sorted(path for path in directory.glob(f"*{ANNOTATION_SUFFIX}") if path.stem not in RESERVED_STEMS)
    if pool is not None:
        return pool.map(load_annotated, paths)
    return [load_annotated(path) for path in paths]
