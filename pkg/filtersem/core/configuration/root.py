"""Models used for the root configuration."""
from typing import (
    Any,
    Dict,
    Union,
)

from filtersem.core.configuration.analysis import (
    DiscrimConfiguration,
    EvaluationConfiguration,
    ExportConfiguration,
    GAConfiguration,
    RegressionConfiguration,
    StimulusConfiguration,
)
from filtersem.core.configuration.attribute import (
    Attribute,
    AttributesContainer,
    IntAttributeType,
    StrAttributeType,
)
from filtersem.core.configuration.corpus import (
    CorpusConfiguration,
    SyntheticConfiguration,
)
from filtersem.core.configuration.error import (
    InvalidAttributeError,
    MissingAttributeError,
)
from filtersem.core.configuration.network import NetworkConfiguration
from filtersem.core.configuration.validator import (
    non_negative_validator,
    not_blank_validator,
    positive_validator,
)


SectionType = Union[Dict[str, Any], Attribute[Any], Any]


class RootConfiguration(AttributesContainer):
    """A run configuration."""

    seed: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Seed",
        description="Seed of every random draw of the run",
        default=0,
        validator=non_negative_validator,
    )
    output: StrAttributeType = Attribute.create(
        value_type=str,
        short_description="Output directory",
        description="Directory receiving the run results and their manifest",
        validator=not_blank_validator,
    )
    workers: IntAttributeType = Attribute.create(
        value_type=int,
        short_description="Workers",
        description="Number of parallel workers ; never changes the results",
        default=1,
        validator=positive_validator,
    )
    corpus: SectionType = Attribute.create(
        value_type=CorpusConfiguration,
        short_description="Corpus",
    )
    synthetic: SectionType = Attribute.create(
        value_type=SyntheticConfiguration,
        short_description="Synthetic corpus",
    )
    network: SectionType = Attribute.create(
        value_type=NetworkConfiguration,
        short_description="Network",
    )
    stimulus: SectionType = Attribute.create(
        value_type=StimulusConfiguration,
        short_description="Stimulus detections",
    )
    regression: SectionType = Attribute.create(
        value_type=RegressionConfiguration,
        short_description="Box regression",
    )
    evaluation: SectionType = Attribute.create(
        value_type=EvaluationConfiguration,
        short_description="Evaluation",
    )
    ga: SectionType = Attribute.create(
        value_type=GAConfiguration,
        short_description="Genetic search",
    )
    discrim: SectionType = Attribute.create(
        value_type=DiscrimConfiguration,
        short_description="Discriminativeness",
    )
    export: SectionType = Attribute.create(
        value_type=ExportConfiguration,
        short_description="Top activation sheets",
    )

    def __init__(
        self,
        **kwargs: Any,
    ) -> None:
        """
        Initialize the configuration.

        Missing sections are created with their default values.

        Args:
            kwargs: keyword arguments
        """
        super().__init__(**kwargs)
        for name, attribute in self.get_attributes().items():
            if issubclass(attribute.value_type, AttributesContainer) and getattr(self, name) is None:
                setattr(self, name, attribute.value_type())

    def override(
        self,
        path: str,
        value: Any,
    ) -> None:
        """
        Override a value designated by a dotted path (e.g. `ga.population`).

        Args:
            path: a dotted path
            value: the new value

        Raises:
            InvalidAttributeError: if the path does not designate an attribute
        """
        *sections, key = path.split(".")
        container: AttributesContainer = self
        for section in sections:
            child = getattr(container, section, None) if section in container.get_attributes() else None
            if not isinstance(child, AttributesContainer):
                raise InvalidAttributeError(
                    message=f"Unknown configuration section {repr(section)} in {repr(path)}",
                    context=self,
                )
            container = child
        if key not in container.get_attributes():
            raise InvalidAttributeError(
                message=f"Unknown configuration key {repr(path)}",
                context=self,
            )
        setattr(container, key, value)

    def require_output(self) -> str:
        """
        Get the output directory of a command writing results.

        Returns:
            the output directory

        Raises:
            MissingAttributeError: if no output directory is configured
        """
        if not self.output:
            raise MissingAttributeError(
                message="An output directory is required (set 'output' or use --output-dir)",
                context=self,
            )
        return self.output
