"""Core exceptions."""


class CoreException(Exception):
    """A class representing a core error."""

    exit_code: int = 1


class ConfigurationError(CoreException):
    """An error caused by an invalid configuration (network spec, run configuration, arguments)."""

    exit_code = 2


class DataError(CoreException):
    """An error caused by missing or malformed input data."""

    exit_code = 3


class NumericError(CoreException):
    """An error caused by a non-finite or otherwise unusable numeric value."""

    exit_code = 4
