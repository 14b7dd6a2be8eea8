"""Models used for the analysis configurations."""
from typing import (
    Any,
    Union,
)

from filtersem.core.configuration.attribute import (
    Attribute,
    AttributesContainer,
    BoolAttributeType,
    ExportableList,
    FloatAttributeType,
    IntAttributeType,
    StrAttributeType,
)
from filtersem.core.configuration.validator import (
    choice_validator,
    non_negative_validator,
    positive_validator,
    probability_validator,
    range_validator,
)


open_unit_validator = range_validator(
    minimum=0,
    maximum=1,
    exclusive_minimum=True,
    exclusive_maximum=True,
)

CROSSOVER_TYPES = (
    "single_point",
    "two_point",
    "uniform",
)
SCORE_MODES = (
    "softmax",
    "logit",
)


class StimulusConfiguration(AttributesContainer):
    """Turning feature maps into stimulus detections."""

    layers: Union[ExportableList[str, str], Attribute[Any]] = Attribute.create(
        value_type=ExportableList,
        short_description="Analyzed layers",
        description="Conv layers whose filters are analyzed (all conv layers when empty)",
    )
    min_value: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Activation floor",
        description="Local maxima must be strictly greater than this value",
        default=0.0,
        validator=non_negative_validator,
    )
    nms_threshold: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="NMS IoU threshold",
        default=0.3,
        validator=open_unit_validator,
    )


class RegressionConfiguration(AttributesContainer):
    """Box regression from activations to part boxes."""

    enabled: BoolAttributeType = Attribute.create(
        value_type=bool,
        short_description="Use regressed boxes",
        default=True,
    )
    min_pairs: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Minimum training pairs",
        default=20,
        validator=positive_validator,
    )
    ridge: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Ridge penalty",
        default=1e-6,
        validator=non_negative_validator,
    )


class EvaluationConfiguration(AttributesContainer):
    """Detection scoring."""

    iou_threshold: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Matching IoU threshold",
        default=0.4,
        validator=open_unit_validator,
    )
    ap_threshold: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Emergence AP threshold",
        default=0.3,
        validator=probability_validator,
    )
    recall_threshold: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Coverage recall threshold",
        default=0.5,
        validator=probability_validator,
    )
    curve_filters: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Filters with exported curves",
        description="Number of best individual filters whose PR and recall-vs-false-positive curves are exported",
        default=3,
        validator=non_negative_validator,
    )
    export_detections: BoolAttributeType = Attribute.create(
        value_type=bool,
        short_description="Export detections",
        description="Write the per-filter detections of every analyzed layer as CSV",
        default=False,
    )


class GAConfiguration(AttributesContainer):
    """Genetic search of filter combinations."""

    enabled: BoolAttributeType = Attribute.create(
        value_type=bool,
        short_description="Run the genetic search",
        default=True,
    )
    population: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Population size",
        default=200,
        validator=positive_validator,
    )
    generations: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Generations",
        default=100,
        validator=non_negative_validator,
    )
    crossover_p: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Crossover probability",
        default=0.7,
        validator=probability_validator,
    )
    mutation_p: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Mutation probability",
        description="Probability that a chromosome is mutated ; mutation flips each bit with probability 1/N",
        default=0.3,
        validator=probability_validator,
    )
    init_p: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Initial bit probability",
        default=0.02,
        validator=probability_validator,
    )
    elitism: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Elite chromosomes",
        default=1,
        validator=non_negative_validator,
    )
    crossover: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Crossover type",
        default="single_point",
        validator=choice_validator(CROSSOVER_TYPES),
    )


class DiscrimConfiguration(AttributesContainer):
    """Filter and part discriminativeness."""

    score_mode: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Class score",
        description="Score compared with and without ablation: softmax probability or pre-softmax logit",
        default="softmax",
        validator=choice_validator(SCORE_MODES),
    )
    sigma_factor: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Discriminative threshold",
        description="A target is discriminative when its score difference exceeds this many standard deviations",
        default=2.0,
        validator=positive_validator,
    )
    layers: Union[ExportableList[str, str], Attribute[Any]] = Attribute.create(
        value_type=ExportableList,
        short_description="Ablated layers",
        description="Conv layers whose filters are ablated (the analyzed layers when empty)",
    )


class ExportConfiguration(AttributesContainer):
    """Top activation sheets."""

    top_k: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Activations per filter",
        default=10,
        validator=positive_validator,
    )
    columns: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Sheet columns",
        default=5,
        validator=positive_validator,
    )
    shade: FloatAttributeType = Attribute.create(
        value_type=float,
        short_description="Shade level",
        description="Gray level shown where the activation is zero",
        default=0.0,
        validator=probability_validator,
    )
