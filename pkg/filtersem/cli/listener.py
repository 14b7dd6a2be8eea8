"""Models and functions used for observing the analysis runs from the CLI."""
import sys
from datetime import datetime

from singledispatchmethod import singledispatchmethod

from filtersem.core.core import write_message
from filtersem.core.corpus.listener import (
    GeneratorEndEvent,
    GeneratorEvent,
    GeneratorListener,
    GeneratorStartEvent,
)
from filtersem.core.export.listener import (
    ExportEndEvent,
    ExportEvent,
    ExportListener,
    ExportSheetEvent,
    ExportStartEvent,
)
from filtersem.core.listener import WarningEvent
from filtersem.core.pipeline.listener import (
    PipelineCorpusEvent,
    PipelineDiscrimEvent,
    PipelineEndEvent,
    PipelineEvent,
    PipelineLayerEvent,
    PipelineListener,
    PipelinePartEvent,
    PipelineStartEvent,
)
from filtersem.core.selection.listener import (
    GAEndEvent,
    GAEvent,
    GAListener,
)


def _print(
    message: str,
    end: str = "\n",
) -> None:
    write_message(
        stream=sys.stdout,
        message=message,
        end=end,
    )


def _print_timestamped(
    message: str,
    end: str = "\n",
) -> None:
    now = datetime.now()
    formatted_now = now.strftime("%Y-%m-%d %H:%M:%S.%f")
    _print(
        message=f"[{formatted_now}] {message}",
        end=end,
    )


def _print_warning(
    event: WarningEvent,
) -> None:
    write_message(
        stream=sys.stderr,
        message=f"Warning: {event.message}",
    )


def _percent(
    value: float,
) -> str:
    return f"{value * 100:.1f}"


class CliPipelineListener(PipelineListener):
    """A listener that print details about the event on the standard output stream."""

    def on_event(
        self,
        event: PipelineEvent,
    ) -> None:
        """
        Receive an event.

        Args:
            event: an event
        """
        if isinstance(event, WarningEvent):
            _print_warning(event)
            return
        self._on_event(event)

    @singledispatchmethod
    def _on_event(
        self,
        event: PipelineEvent,
    ) -> None:
        listener_name = self.__class__.__name__
        event_name = event.__class__.__name__
        _print(
            message=f"{listener_name}: Unhandled event {event_name}",
        )

    @_on_event.register
    def _on_start(
        self,
        event: PipelineStartEvent,
    ) -> None:
        _print_timestamped(
            message=f"Starting {event.command} in {event.output}:",
        )

    @_on_event.register
    def _on_corpus(
        self,
        event: PipelineCorpusEvent,
    ) -> None:
        _print_timestamped(
            message=f"  Corpus: {event.images} image(s), {event.crops} crop(s), "
            + f"{event.object_classes} object class(es), {event.part_classes} part class(es)",
        )

    @_on_event.register
    def _on_layer(
        self,
        event: PipelineLayerEvent,
    ) -> None:
        _print_timestamped(
            message=f"  Layer {event.layer}: {event.filters} filter(s), {event.activations} local maxima",
        )

    @_on_event.register
    def _on_part(
        self,
        event: PipelinePartEvent,
    ) -> None:
        details = [f"best filter {event.best_filter} (AP {_percent(event.best_ap)})"]
        if event.ga_ap is not None:
            details.append(f"GA AP {_percent(event.ga_ap)} with {event.ga_filters} filter(s)")
        _print_timestamped(
            message=f"    {event.layer} {event.object_class}/{event.part_class}: {' ; '.join(details)}",
        )

    @_on_event.register
    def _on_discrim(
        self,
        event: PipelineDiscrimEvent,
    ) -> None:
        _print_timestamped(
            message=f"    {event.object_class}: {event.discriminative_filters} discriminative filter(s), "
            + f"{event.parts} part(s) blacked out",
        )

    @_on_event.register
    def _on_end(
        self,
        event: PipelineEndEvent,
    ) -> None:
        _print_timestamped(
            message=f"{event.command.capitalize()} done.",
        )


class CliGAListener(GAListener):
    """A listener that print the outcome of every genetic search on the standard output stream."""

    def on_event(
        self,
        event: GAEvent,
    ) -> None:
        """
        Receive an event.

        Args:
            event: an event
        """
        if isinstance(event, GAEndEvent):
            _print_timestamped(
                message=f"      GA {event.part_class}: fitness {_percent(event.best_fitness)}, "
                + f"{event.bits_set} filter(s), {event.evaluations} evaluation(s)",
            )


class CliGeneratorListener(GeneratorListener):
    """A listener that print details about the event on the standard output stream."""

    def on_event(
        self,
        event: GeneratorEvent,
    ) -> None:
        """
        Receive an event.

        Args:
            event: an event
        """
        self._on_event(event)

    @singledispatchmethod
    def _on_event(
        self,
        event: GeneratorEvent,
    ) -> None:
        pass

    @_on_event.register
    def _on_start(
        self,
        event: GeneratorStartEvent,
    ) -> None:
        _print_timestamped(
            message=f"Generating {event.images} image(s) of {event.object_classes} object class(es) "
            + f"with seed {event.seed}:",
        )

    @_on_event.register
    def _on_end(
        self,
        event: GeneratorEndEvent,
    ) -> None:
        _print_timestamped(
            message=f"Generation done: {event.images} image(s), {event.parts} part(s).",
        )


class CliExportListener(ExportListener):
    """A listener that print details about the event on the standard output stream."""

    def on_event(
        self,
        event: ExportEvent,
    ) -> None:
        """
        Receive an event.

        Args:
            event: an event
        """
        if isinstance(event, WarningEvent):
            _print_warning(event)
            return
        self._on_event(event)

    @singledispatchmethod
    def _on_event(
        self,
        event: ExportEvent,
    ) -> None:
        listener_name = self.__class__.__name__
        event_name = event.__class__.__name__
        _print(
            message=f"{listener_name}: Unhandled event {event_name}",
        )

    @_on_event.register
    def _on_start(
        self,
        event: ExportStartEvent,
    ) -> None:
        _print_timestamped(
            message=f"Exporting the top {event.k} activations of {event.layers} layer(s):",
        )

    @_on_event.register
    def _on_sheet(
        self,
        event: ExportSheetEvent,
    ) -> None:
        _print_timestamped(
            message=f"  {event.layer} filter {event.filter} on {event.object_class}: {event.panels} panel(s)",
        )

    @_on_event.register
    def _on_end(
        self,
        event: ExportEndEvent,
    ) -> None:
        _print_timestamped(
            message=f"Export done: {event.sheets} sheet(s).",
        )
