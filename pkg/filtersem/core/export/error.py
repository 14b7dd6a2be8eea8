"""Errors raised by the sheet exporter."""
from filtersem.core.exceptions import DataError


class ExportError(DataError):
    """Top activation records that do not match the corpus or the network."""
