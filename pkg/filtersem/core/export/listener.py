"""Models and functions used for observing the sheet exporter."""
from abc import ABC
from dataclasses import dataclass
from pathlib import Path

from filtersem.core.listener import (
    Event,
    Listener,
    WarningEvent,
)


@dataclass
class ExportEvent(Event, ABC):
    """A base event sent by the sheet exporter."""


@dataclass
class ExportStartEvent(ExportEvent):
    """An event sent when the export starts."""

    layers: int
    k: int


@dataclass
class ExportSheetEvent(ExportEvent):
    """An event sent when a sheet has been written."""

    layer: str
    filter: int
    object_class: str
    panels: int
    path: Path


@dataclass
class ExportEndEvent(ExportEvent):
    """An event sent when the export ends."""

    sheets: int


@dataclass
class ExportWarningEvent(ExportEvent, WarningEvent):
    """An event sent when a sheet has fewer panels than requested."""


class ExportListener(Listener[ExportEvent], ABC):
    """A listener receiving events from the sheet exporter."""


class NoOpExportListener(ExportListener):
    """A listener receiving events from the sheet exporter and doing nothing."""

    def on_event(
        self,
        event: ExportEvent,
    ) -> None:
        """
        Receive an event and do nothing.

        Args:
            event: an event
        """
