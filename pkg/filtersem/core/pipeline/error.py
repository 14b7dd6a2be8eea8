"""Errors raised by the analysis runs."""
from filtersem.core.exceptions import DataError


class PipelineError(DataError):
    """A run whose inputs are missing or inconsistent."""
