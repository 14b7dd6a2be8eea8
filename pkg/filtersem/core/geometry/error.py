"""Errors raised by the geometry helpers."""
from filtersem.core.exceptions import ConfigurationError


class GeometryError(ConfigurationError):
    """A receptive field requested for a layer or a position that has none."""
