"""Models and functions used for observing analysis runs."""
from abc import ABC
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from filtersem.core.listener import (
    Event,
    Listener,
    WarningEvent,
)


@dataclass
class PipelineEvent(Event, ABC):
    """A base event sent by an analysis run."""


@dataclass
class PipelineStartEvent(PipelineEvent):
    """An event sent when a run starts, once its manifest is written."""

    command: str
    output: Path


@dataclass
class PipelineCorpusEvent(PipelineEvent):
    """An event sent when the corpus has been loaded, filtered and cropped."""

    images: int
    crops: int
    object_classes: int
    part_classes: int


@dataclass
class PipelineLayerEvent(PipelineEvent):
    """An event sent when the activations of a layer have been extracted."""

    layer: str
    filters: int
    activations: int


@dataclass
class PipelinePartEvent(PipelineEvent):
    """An event sent when a part class has been analyzed in a layer."""

    layer: str
    object_class: str
    part_class: str
    best_filter: int
    best_ap: float
    ga_ap: Optional[float]
    ga_filters: Optional[int]


@dataclass
class PipelineDiscrimEvent(PipelineEvent):
    """An event sent when the discriminativeness of an object class has been measured."""

    object_class: str
    discriminative_filters: int
    parts: int


@dataclass
class PipelineEndEvent(PipelineEvent):
    """An event sent when a run ends."""

    command: str
    output: Path


@dataclass
class PipelineWarningEvent(PipelineEvent, WarningEvent):
    """An event sent when a run degrades instead of failing."""


class PipelineListener(Listener[PipelineEvent], ABC):
    """A listener receiving events from analysis runs."""


class NoOpPipelineListener(PipelineListener):
    """A listener receiving events from analysis runs and doing nothing."""

    def on_event(
        self,
        event: PipelineEvent,
    ) -> None:
        """
        Receive an event and do nothing.

        Args:
            event: an event
        """
