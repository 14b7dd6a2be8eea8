"""Errors raised by the discrimination analysis."""
from filtersem.core.exceptions import (
    DataError,
    NumericError,
)


class DiscrimError(DataError):
    """Inputs that cannot produce a discrimination score or a correlation."""


class UndefinedCorrelationError(NumericError):
    """A correlation of series without variance."""
