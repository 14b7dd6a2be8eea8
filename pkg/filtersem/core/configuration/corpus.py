"""Models used for the corpus and synthetic generator configurations."""
from typing import (
    Any,
    Dict,
    Union,
)

from filtersem.core.configuration.attribute import (
    Attribute,
    AttributesContainer,
    AttributesContainerDict,
    ExportableDict,
    ExportableList,
    FloatAttributeType,
    IntAttributeType,
    StrAttributeType,
)
from filtersem.core.configuration.validator import (
    choice_validator,
    non_negative_validator,
    not_blank_validator,
    positive_validator,
    probability_validator,
    range_validator,
)
from filtersem.core.corpus.patterns import PATTERNS


DEFAULT_JITTER = 0.2


class CorpusConfiguration(AttributesContainer):
    """Where the annotated images live and how they are prepared."""

    path: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Corpus directory",
        description="Directory holding one PPM image and one JSON annotation file per image",
        validator=not_blank_validator,
    )
    context_pad: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Context padding",
        description="Background context added around each object box, as a fraction of the box size",
        default=0.1,
        validator=non_negative_validator,
    )
    absolute_pad: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Absolute context padding",
        description="Background context in source pixels ; takes precedence over the fractional padding when set",
        validator=non_negative_validator,
    )
    min_samples: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Minimum part samples",
        description="Part classes with at most this many instances are discarded",
        default=10,
        validator=non_negative_validator,
    )
    min_size: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Minimum part size",
        description="Part classes whose mean of (width + height) / 2 is at most this many pixels are discarded",
        default=15.0,
        validator=non_negative_validator,
    )
    merges: Union[Dict[str, str], ExportableDict[str, str, str, str], Attribute[Any]] = Attribute.create(
        value_type=ExportableDict,
        short_description="Part label merges",
        description="Mapping of fine-grained part labels to the part class they are merged into",
    )
    object_classes: Union[ExportableList[str, str], Attribute[Any]] = Attribute.create(
        value_type=ExportableList,
        short_description="Object classes",
        description="Restrict the analysis to these object classes (all classes when empty)",
    )


class PartLayoutConfiguration(AttributesContainer):
    """A part planted inside every object of a synthetic class."""

    pattern: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Pattern",
        required=True,
        validator=choice_validator(sorted(PATTERNS)),
    )
    channel: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Color channel",
        description="Channel (0: red, 1: green, 2: blue) the pattern is painted in",
        default=0,
        validator=range_validator(
            minimum=0,
            maximum=2,
        ),
    )
    x: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Horizontal position",
        description="Center of the part relative to the object box (0: left edge, 1: right edge)",
        default=0.5,
        validator=probability_validator,
    )
    y: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Vertical position",
        description="Center of the part relative to the object box (0: top edge, 1: bottom edge)",
        default=0.5,
        validator=probability_validator,
    )
    size: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Relative size",
        description="Side of the part relative to the object side",
        default=0.25,
        validator=range_validator(
            minimum=0,
            maximum=1,
            exclusive_minimum=True,
        ),
    )
    jitter: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Position jitter",
        description="Standard deviation of the part position, relative to the object side",
        default=DEFAULT_JITTER,
        validator=non_negative_validator,
    )
    intensity: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Intensity",
        description="Value added to the channel on pattern pixels",
        default=0.5,
        validator=positive_validator,
    )
    probability: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Presence probability",
        default=1.0,
        validator=probability_validator,
    )


class PartLayouts(AttributesContainerDict[PartLayoutConfiguration]):
    """Parts of a synthetic object class, keyed by part class."""

    def __init__(
        self,
        **kwargs: Any,
    ):
        """
        Initialize the parts.

        Args:
            kwargs: the part layouts
        """
        super().__init__(
            values_type=PartLayoutConfiguration,
            items=kwargs,
        )


class ObjectLayoutConfiguration(AttributesContainer):
    """A synthetic object class: a square body and its planted parts."""

    min_size: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Minimum object side",
        description="Relative to the image side",
        default=0.4,
        validator=range_validator(
            minimum=0,
            maximum=1,
            exclusive_minimum=True,
        ),
    )
    max_size: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Maximum object side",
        description="Relative to the image side",
        default=0.7,
        validator=range_validator(
            minimum=0,
            maximum=1,
            exclusive_minimum=True,
        ),
    )
    tint: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Body tint",
        description="Value added to every channel inside the object box",
        default=0.1,
        validator=non_negative_validator,
    )
    parts: Union[Dict[str, Any], PartLayouts, Attribute[PartLayouts]] = Attribute.create(
        value_type=PartLayouts,
        short_description="Parts",
        required=True,
    )


class ObjectLayouts(AttributesContainerDict[ObjectLayoutConfiguration]):
    """Synthetic object classes, keyed by class name."""

    def __init__(
        self,
        **kwargs: Any,
    ):
        """
        Initialize the object classes.

        Args:
            kwargs: the object layouts
        """
        super().__init__(
            values_type=ObjectLayoutConfiguration,
            items=kwargs,
        )


class SyntheticConfiguration(AttributesContainer):
    """Synthetic planted-part corpus generation."""

    images: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Number of images",
        default=500,
        validator=non_negative_validator,
    )
    image_size: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Image side in pixels",
        default=96,
        validator=positive_validator,
    )
    objects_per_image: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Objects per image",
        default=1,
        validator=positive_validator,
    )
    background: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Background level",
        default=0.3,
        validator=probability_validator,
    )
    noise: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Noise level",
        description="Standard deviation of the gaussian pixel noise",
        default=0.05,
        validator=non_negative_validator,
    )
    objects: Union[Dict[str, Any], ObjectLayouts, Attribute[ObjectLayouts]] = Attribute.create(
        value_type=ObjectLayouts,
        short_description="Object classes",
        description="Object classes as composites of planted part patterns ; a built-in layout is used when empty",
    )
