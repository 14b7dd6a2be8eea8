"""Models and functions used for run configuration loading/dumping."""
from typing import (
    Any,
    TextIO,
)

from filtersem.core.configuration.error import BaseAttributeError
from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.exceptions import ConfigurationError
from filtersem.core.documents import (
    DocumentCodec,
    DocumentError,
)


class LoaderError(ConfigurationError):
    """A loading/dumping error."""


class RootConfigurationLoader:
    """Run configuration reader and writer for one file format."""

    _codec: DocumentCodec

    def __init__(
        self,
        codec: DocumentCodec,
    ) -> None:
        """
        Initialize self.

        Args:
            codec: the document format
        """
        self._codec = codec

    def load(
        self,
        stream: TextIO,
    ) -> RootConfiguration:
        """
        Load a run configuration from a stream.

        An empty document gives the default configuration ; values are not validated.

        Args:
            stream: a stream

        Returns:
            the loaded configuration

        Raises:
            LoaderError: if the document is not a run configuration
        """
        try:
            data = self._codec.read(stream)
        except DocumentError as e:
            raise LoaderError("Unable to deserialize run configuration") from e
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise LoaderError(f"Expecting {dict} for run configuration ; got {type(data)}")
        try:
            return RootConfiguration(**data)
        except (BaseAttributeError, TypeError) as e:
            raise LoaderError("Unable to load run configuration") from e

    def dump(
        self,
        configuration: RootConfiguration,
        stream: TextIO,
        effective: bool = False,
    ) -> None:
        """
        Dump a run configuration in a stream.

        Args:
            configuration: a run configuration
            stream: a stream
            effective: whether defaults are written along with the set values

        Raises:
            LoaderError: if the configuration could not be serialized
        """
        data: Any = configuration.export_effective() if effective else configuration.export()
        try:
            self._codec.write(data, stream)
        except DocumentError as e:
            raise LoaderError("Unable to serialize run configuration") from e
