"""Models and functions used for observing the synthetic corpus generator."""
from abc import ABC
from dataclasses import dataclass

from filtersem.core.listener import (
    Event,
    Listener,
)


@dataclass
class GeneratorEvent(Event, ABC):
    """A base event sent by the synthetic generator."""


@dataclass
class GeneratorStartEvent(GeneratorEvent):
    """An event sent when the generation starts."""

    seed: int
    images: int
    object_classes: int


@dataclass
class GeneratorImageEvent(GeneratorEvent):
    """An event sent when an image has been drawn."""

    image_id: str
    objects: int
    parts: int


@dataclass
class GeneratorEndEvent(GeneratorEvent):
    """An event sent when the generation ends."""

    images: int
    parts: int


class GeneratorListener(Listener[GeneratorEvent], ABC):
    """A listener receiving events from the synthetic generator."""


class NoOpGeneratorListener(GeneratorListener):
    """A listener receiving events from the synthetic generator and doing nothing."""

    def on_event(
        self,
        event: GeneratorEvent,
    ) -> None:
        """
        Receive an event and do nothing.

        Args:
            event: an event
        """
