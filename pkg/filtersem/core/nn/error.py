"""Errors raised by the inference engine."""
from filtersem.core.exceptions import (
    ConfigurationError,
    DataError,
    NumericError,
)


class NetworkConfigurationError(ConfigurationError):
    """An invalid network specification or a call inconsistent with it."""


class WeightFormatError(DataError):
    """A weight file that does not follow the expected layout."""


class WeightSizeError(DataError):
    """A weight file whose array sizes do not match the network specification."""

    layer: str
    expected: int
    actual: int

    def __init__(
        self,
        layer: str,
        expected: int,
        actual: int,
    ):
        """
        Initialize the error.

        Args:
            layer: the name of the offending layer
            expected: the number of values required by the specification
            actual: the number of values found in the file
        """
        super().__init__(f"Layer {repr(layer)} expects {expected} values ; the weight file holds {actual}")
        self.layer = layer
        self.expected = expected
        self.actual = actual


class EngineNumericError(NumericError):
    """A non-finite value produced by a layer."""

    layer: str

    def __init__(
        self,
        layer: str,
    ):
        """
        Initialize the error.

        Args:
            layer: the name of the layer producing the value
        """
        super().__init__(f"Non-finite value produced by layer {repr(layer)}")
        self.layer = layer
