"""Errors raised by the box regression."""
from filtersem.core.exceptions import (
    ConfigurationError,
    DataError,
    NumericError,
)


class InsufficientPairsError(DataError):
    """Too few training pairs to fit a regressor."""

    count: int
    minimum: int

    def __init__(
        self,
        count: int,
        minimum: int,
    ):
        """
        Initialize the error.

        Args:
            count: the number of available pairs
            minimum: the number of required pairs
        """
        super().__init__(f"{count} training pairs available ; at least {minimum} required")
        self.count = count
        self.minimum = minimum


class RegressorDimensionError(ConfigurationError):
    """A regressor applied to features of another dimension."""


class RegressionNumericError(NumericError):
    """A regression producing non-finite weights."""
