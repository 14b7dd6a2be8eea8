"""Models and functions used for observing a filter-combination search."""
from abc import ABC
from dataclasses import dataclass

from filtersem.core.listener import (
    Event,
    Listener,
)


@dataclass
class GAEvent(Event, ABC):
    """A base event sent by the genetic algorithm."""


@dataclass
class GAStartEvent(GAEvent):
    """An event sent when a search starts."""

    part_class: str
    n_filters: int
    generations: int


@dataclass
class GAGenerationEvent(GAEvent):
    """An event sent when a generation has been scored."""

    part_class: str
    generation: int
    best_fitness: float
    mean_fitness: float
    bits_set: int


@dataclass
class GAEndEvent(GAEvent):
    """An event sent when a search ends."""

    part_class: str
    best_fitness: float
    bits_set: int
    evaluations: int


class GAListener(Listener[GAEvent], ABC):
    """A listener receiving events from the genetic algorithm."""


class NoOpGAListener(GAListener):
    """A listener receiving events from the genetic algorithm and doing nothing."""

    def on_event(
        self,
        event: GAEvent,
    ) -> None:
        """
        Receive an event and do nothing.

        Args:
            event: an event
        """
