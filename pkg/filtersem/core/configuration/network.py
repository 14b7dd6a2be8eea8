"""Models used for the network configuration."""
from typing import (
    Any,
    List,
    Optional,
    Union,
)

from filtersem.core.configuration.attribute import (
    Attribute,
    AttributesContainer,
    AttributesContainerList,
    FloatAttributeType,
    IntAttributeType,
    StrAttributeType,
)
from filtersem.core.configuration.validator import (
    choice_validator,
    non_negative_validator,
    not_blank_validator,
    positive_validator,
    range_validator,
)
from filtersem.core.corpus.patterns import PATTERNS


class InjectionConfiguration(AttributesContainer):
    """A conv filter overwritten with the zero-mean template of a planted pattern."""

    layer: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Layer",
        description="Name of a conv layer fed by the input image",
        required=True,
        validator=not_blank_validator,
    )
    filter: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Filter index",
        required=True,
        validator=non_negative_validator,
    )
    pattern: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Pattern",
        required=True,
        validator=choice_validator(sorted(PATTERNS)),
    )
    channel: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Color channel",
        default=0,
        validator=range_validator(
            minimum=0,
            maximum=2,
        ),
    )
    size: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Template side",
        description="Side of the rasterized pattern, centered in the kernel ; the kernel size when unset",
        validator=positive_validator,
    )
    gain: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Template gain",
        default=1.0,
        validator=positive_validator,
    )


class Injections(AttributesContainerList[InjectionConfiguration]):
    """A list of matched-filter injections."""

    def __init__(
        self,
        items: Optional[List[Any]] = None,
    ):
        """
        Initialize the list of injections.

        Args:
            items: a list of injections
        """
        super().__init__(
            values_type=InjectionConfiguration,
            items=items,
        )


class NetworkConfiguration(AttributesContainer):
    """The network under analysis."""

    spec: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Network specification",
        description="Path to the JSON network specification",
        validator=not_blank_validator,
    )
    weights: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Weight file",
        description="Path to the weight file ; weights are randomly initialized from the run seed when unset",
        validator=not_blank_validator,
    )
    inject: Union[List[Any], Injections, Attribute[Injections]] = Attribute.create(
        value_type=Injections,
        short_description="Matched-filter injections",
    )
