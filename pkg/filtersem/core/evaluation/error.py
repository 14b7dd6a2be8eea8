"""Errors raised by the detection scoring."""
from filtersem.core.exceptions import DataError


class DomainError(DataError):
    """A box without area given to an overlap measure, or an overlap threshold outside (0, 1)."""


class UndefinedAPError(DataError):
    """An average precision requested for a part class without ground truth."""
