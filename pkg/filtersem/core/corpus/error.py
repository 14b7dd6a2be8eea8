"""Errors raised by the corpus handling."""
from filtersem.core.exceptions import (
    ConfigurationError,
    DataError,
)


class CorpusError(DataError):
    """A missing, malformed or inconsistent corpus."""


class LayoutError(ConfigurationError):
    """A synthetic layout that cannot be drawn."""
