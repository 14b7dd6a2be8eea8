"""Errors raised while building and validating run configurations."""
from typing import (
    Any,
    Dict,
)

from filtersem.core.exceptions import ConfigurationError


class BaseAttributeError(ConfigurationError):
    """A configuration key (or section) that cannot be used."""

    message: str
    context: Any

    def __init__(
        self,
        message: str,
        context: Any,
    ):
        """
        Initialize the error.

        Args:
            message: a message
            context: the attribute or section being checked
        """
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        """
        Get the message.

        Returns:
            the message
        """
        return self.message

    def __repr__(self) -> str:
        """
        Get the representation of the error.

        Returns:
            the representation
        """
        return f"{type(self).__name__}({repr(self.message)}, context={repr(self.context)})"


class MissingAttributeError(BaseAttributeError):
    """A required key with neither a value nor a default."""


class InvalidAttributeError(BaseAttributeError):
    """A value of the wrong type, out of range or otherwise rejected."""


class UnsupportedAttributeError(BaseAttributeError):
    """A key no section declares."""


class AttributesError(BaseAttributeError):
    """The errors of a section, keyed like the section (attribute names, list indexes or mapping keys)."""

    errors: Dict[str, BaseAttributeError]

    def __init__(
        self,
        message: str,
        errors: Dict[str, BaseAttributeError],
        context: Any,
    ):
        """
        Initialize the error.

        Args:
            message: a message
            errors: the nested errors, by key
            context: the section being checked
        """
        super().__init__(
            message=message,
            context=context,
        )
        self.errors = errors

    def __repr__(self) -> str:
        """
        Get the representation of the error.

        Returns:
            the representation
        """
        return f"{type(self).__name__}({repr(self.message)}, errors={repr(self.errors)})"
