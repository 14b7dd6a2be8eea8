"""Synthetic planted-part corpus: square objects carrying pattern parts at known places."""
from dataclasses import (
    dataclass,
    field,
)
from typing import (
    Dict,
    List,
    Optional,
    Tuple,
)

import numpy as np

from filtersem.core.configuration.corpus import (
    DEFAULT_JITTER,
    SyntheticConfiguration,
)
from filtersem.core.corpus.error import LayoutError
from filtersem.core.corpus.listener import (
    GeneratorEndEvent,
    GeneratorImageEvent,
    GeneratorListener,
    GeneratorStartEvent,
    NoOpGeneratorListener,
)
from filtersem.core.corpus.model import (
    AnnotatedImage,
    ObjectAnnotation,
    PartAnnotation,
    from_uint8,
    to_uint8,
)
from filtersem.core.corpus.patterns import (
    PATTERNS,
    pattern_mask,
)
from filtersem.core.geometry.box import (
    Box,
    mask_box,
)


MIN_PART_SIDE = 3
JITTER_DRAWS = 16


@dataclass(frozen=True)
class PartLayout:
    """
    A planted part.

    `x` and `y` locate the mean part center relative to the object box, `size` is the part side relative to the object
    side, and `jitter` the standard deviation of the center, relative to the object side. Centers are drawn from a
    normal distribution truncated to the object, so a part never sits at a fixed offset from its object.
    """

    pattern: str
    channel: int = 0
    x: float = 0.5
    y: float = 0.5
    size: float = 0.25
    jitter: float = DEFAULT_JITTER
    intensity: float = 0.5
    probability: float = 1.0


@dataclass(frozen=True)
class ObjectLayout:
    """A synthetic object class ; sides are relative to the image side."""

    parts: Dict[str, PartLayout]
    min_size: float = 0.4
    max_size: float = 0.7
    tint: float = 0.1


@dataclass(frozen=True)
class SyntheticLayout:
    """The layout of a synthetic corpus."""

    objects: Dict[str, ObjectLayout]
    image_size: int = 96
    objects_per_image: int = 1
    background: float = 0.3
    noise: float = 0.05

    def validate(self) -> None:
        """
        Check that every object and part can be drawn.

        Raises:
            LayoutError: if the layout cannot be drawn
        """
        if not self.objects:
            raise LayoutError("A synthetic layout needs at least one object class")
        if self.image_size < MIN_PART_SIDE or self.objects_per_image < 1:
            raise LayoutError(f"Invalid image size {self.image_size} or object count {self.objects_per_image}")
        for object_class, obj in self.objects.items():
            if not 0 < obj.min_size <= obj.max_size <= 1:
                raise LayoutError(f"Object {object_class}: invalid size range [{obj.min_size}, {obj.max_size}]")
            if not obj.parts:
                raise LayoutError(f"Object {object_class} has no part")
            for part_class, part in obj.parts.items():
                name = f"{object_class}.{part_class}"
                if part.pattern not in PATTERNS:
                    raise LayoutError(f"Part {name}: unknown pattern {repr(part.pattern)}")
                if part.channel not in (0, 1, 2):
                    raise LayoutError(f"Part {name}: invalid channel {part.channel}")
                if not 0 < part.size <= 1:
                    raise LayoutError(f"Part {name}: invalid relative size {part.size}")
                half = part.size / 2
                if not (half <= part.x <= 1 - half and half <= part.y <= 1 - half):
                    raise LayoutError(f"Part {name} at ({part.x}, {part.y}) overflows its object")


def default_layout() -> SyntheticLayout:
    """
    Get the built-in layout: three object classes with two to four parts each.

    Returns:
        the layout
    """
    return SyntheticLayout(
        objects={
            "bicycle": ObjectLayout(
                parts={
                    "wheel": PartLayout(pattern="ring", channel=2, x=0.3, y=0.7, size=0.25),
                    "saddle": PartLayout(pattern="bar", channel=1, x=0.5, y=0.25, size=0.25),
                },
            ),
            "car": ObjectLayout(
                parts={
                    "wheel": PartLayout(pattern="ring", channel=0, x=0.3, y=0.7, size=0.25),
                    "window": PartLayout(pattern="square", channel=2, x=0.55, y=0.3, size=0.25),
                    "light": PartLayout(pattern="disc", channel=1, x=0.8, y=0.55, size=0.2),
                },
            ),
            "face": ObjectLayout(
                parts={
                    "eye": PartLayout(pattern="disc", channel=0, x=0.3, y=0.3, size=0.2),
                    "nose": PartLayout(pattern="cross", channel=1, x=0.6, y=0.5, size=0.2),
                    "mouth": PartLayout(pattern="bar", channel=2, x=0.5, y=0.8, size=0.25),
                    "ear": PartLayout(pattern="checker", channel=0, x=0.85, y=0.3, size=0.2, probability=0.8),
                },
                tint=0.15,
            ),
        },
    )


def layout_from_configuration(
    configuration: SyntheticConfiguration,
) -> SyntheticLayout:
    """
    Build a layout from the synthetic section of a run configuration.

    Args:
        configuration: the synthetic section

    Returns:
        the layout ; the built-in objects when the section declares none
    """
    objects: Optional[Dict[str, ObjectLayout]] = None
    if configuration.objects:
        objects = {
            object_class: ObjectLayout(
                parts={
                    part_class: PartLayout(
                        pattern=part.pattern,
                        channel=part.channel,
                        x=part.x,
                        y=part.y,
                        size=part.size,
                        jitter=part.jitter,
                        intensity=part.intensity,
                        probability=part.probability,
                    )
                    for part_class, part in (obj.parts or {}).items()
                },
                min_size=obj.min_size,
                max_size=obj.max_size,
                tint=obj.tint,
            )
            for object_class, obj in configuration.objects.items()
        }
    return SyntheticLayout(
        objects=objects if objects is not None else default_layout().objects,
        image_size=configuration.image_size,
        objects_per_image=configuration.objects_per_image,
        background=configuration.background,
        noise=configuration.noise,
    )


@dataclass
class _Canvas:
    side: int
    pixels: np.ndarray
    objects: List[ObjectAnnotation] = field(default_factory=list)
    parts: List[PartAnnotation] = field(default_factory=list)


def _part_center(
    part: PartLayout,
    rng: np.random.Generator,
) -> Tuple[float, float]:
    half = part.size / 2
    mean = np.array([part.x, part.y])
    center = mean
    for _ in range(JITTER_DRAWS):
        center = mean + rng.normal(0.0, part.jitter, size=2)
        if np.all((half <= center) & (center <= 1 - half)):
            break
    else:
        center = np.clip(center, half, 1 - half)
    return float(center[0]), float(center[1])


def _draw_object(
    canvas: _Canvas,
    object_class: str,
    layout: ObjectLayout,
    rng: np.random.Generator,
) -> None:
    side = canvas.side
    object_side = int(np.clip(round(rng.uniform(layout.min_size, layout.max_size) * side), MIN_PART_SIDE, side))
    ox = int(rng.integers(0, side - object_side + 1))
    oy = int(rng.integers(0, side - object_side + 1))
    parent = len(canvas.objects)
    canvas.objects.append(
        ObjectAnnotation(
            object_class=object_class,
            box=Box(
                x=ox,
                y=oy,
                w=object_side,
                h=object_side,
            ),
        )
    )
    canvas.pixels[:, oy : oy + object_side, ox : ox + object_side] += layout.tint
    for part_class in sorted(layout.parts):
        part = layout.parts[part_class]
        present = rng.random() < part.probability
        cx, cy = _part_center(
            part=part,
            rng=rng,
        )
        if not present:
            continue
        part_side = min(max(MIN_PART_SIDE, int(round(part.size * object_side))), object_side)
        px = int(round(ox + cx * object_side - part_side / 2))
        py = int(round(oy + cy * object_side - part_side / 2))
        # rounding may still push the part out by a pixel
        px = min(max(px, ox), ox + object_side - part_side)
        py = min(max(py, oy), oy + object_side - part_side)
        mask = np.zeros((side, side), dtype=bool)
        mask[py : py + part_side, px : px + part_side] = pattern_mask(part.pattern, part_side)
        if not mask.any():
            continue
        canvas.pixels[part.channel][mask] += part.intensity
        canvas.parts.append(
            PartAnnotation(
                part_class=part_class,
                parent=parent,
                box=mask_box(mask),
                mask=mask,
            )
        )


def generate_synthetic(
    seed: int,
    n_images: int,
    layout: Optional[SyntheticLayout] = None,
    listener: Optional[GeneratorListener] = None,
) -> List[AnnotatedImage]:
    """
    Draw a synthetic corpus.

    Every image has a uniform background, `objects_per_image` tinted square objects of random classes, and the
    planted parts of each object, then gaussian noise. Pixels are quantized to 8 bits so a saved and reloaded
    corpus is identical to the generated one.

    Args:
        seed: the seed of the random generator
        n_images: the number of images
        layout: the layout ; the built-in one by default
        listener: a listener

    Returns:
        the images, with ids "000000", "000001", ...

    Raises:
        LayoutError: if the layout cannot be drawn
    """
    layout = layout or default_layout()
    layout.validate()
    listener = listener or NoOpGeneratorListener()
    listener.on_event(
        GeneratorStartEvent(
            seed=seed,
            images=n_images,
            object_classes=len(layout.objects),
        )
    )
    rng = np.random.default_rng(seed)
    classes = sorted(layout.objects)
    side = layout.image_size
    images = []
    total_parts = 0
    for index in range(n_images):
        canvas = _Canvas(
            side=side,
            pixels=np.full((3, side, side), layout.background, dtype=np.float64),
        )
        for _ in range(layout.objects_per_image):
            object_class = classes[int(rng.integers(len(classes)))]
            _draw_object(
                canvas=canvas,
                object_class=object_class,
                layout=layout.objects[object_class],
                rng=rng,
            )
        canvas.pixels += rng.normal(0.0, 1.0, size=canvas.pixels.shape) * layout.noise
        image = AnnotatedImage(
            image_id=f"{index:06d}",
            image=from_uint8(to_uint8(canvas.pixels)),
            objects=canvas.objects,
            parts=canvas.parts,
        )
        total_parts += len(image.parts)
        images.append(image)
        listener.on_event(
            GeneratorImageEvent(
                image_id=image.image_id,
                objects=len(image.objects),
                parts=len(image.parts),
            )
        )
    listener.on_event(
        GeneratorEndEvent(
            images=len(images),
            parts=total_parts,
        )
    )
    return images
