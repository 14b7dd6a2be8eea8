"""Functions and models used in validators."""
from dataclasses import dataclass
from typing import (
    Any,
    Collection,
    Dict,
    Optional,
    Tuple,
    TypeVar,
)

from typing_extensions import Protocol


class ValidatorError(Exception):
    """A class representing a validator error."""


T = TypeVar("T", contravariant=True)


class ValidatorProtocol(Protocol[T]):
    """Protocol for validators."""

    def __call__(
        self,
        value: T,
    ) -> None:
        """
        Validate the given value.

        Args:
            value: the value to be validated
        """
        ...


def not_empty_validator(
    value: Any,
) -> None:
    """
    Validate the emptiness.

    Args:
        value: the value to be validated

    Raises:
        ValidatorError: if the value is empty
    """
    if value is not False and not value:
        raise ValidatorError(f"{repr(value)} is empty")


def not_blank_validator(
    value: str,
) -> None:
    """
    Validate that the value is not a blank string (only whitespaces).

    Args:
        value: the value to be validated

    Raises:
        ValidatorError: if the value is blank
    """
    if not value.strip():
        raise ValidatorError(f"{repr(value)} is blank")


@dataclass(frozen=True)
class RangeValidator:
    """A validator checking that a number lies in a range ; unset bounds are open."""

    minimum: Optional[float] = None
    maximum: Optional[float] = None
    exclusive_minimum: bool = False
    exclusive_maximum: bool = False

    def __call__(
        self,
        value: float,
    ) -> None:
        """
        Validate the given value.

        Args:
            value: the value to be validated

        Raises:
            ValidatorError: if the value is out of the range
        """
        if self.minimum is not None:
            if value < self.minimum or (self.exclusive_minimum and value == self.minimum):
                bound = ">" if self.exclusive_minimum else ">="
                raise ValidatorError(f"{repr(value)} is not {bound} {self.minimum}")
        if self.maximum is not None:
            if value > self.maximum or (self.exclusive_maximum and value == self.maximum):
                bound = "<" if self.exclusive_maximum else "<="
                raise ValidatorError(f"{repr(value)} is not {bound} {self.maximum}")

    def as_schema(self) -> Dict[str, Any]:
        """
        Get the JSON schema keywords of the range.

        Returns:
            the keywords
        """
        schema: Dict[str, Any] = {}
        if self.minimum is not None:
            schema["exclusiveMinimum" if self.exclusive_minimum else "minimum"] = self.minimum
        if self.maximum is not None:
            schema["exclusiveMaximum" if self.exclusive_maximum else "maximum"] = self.maximum
        return schema


def range_validator(
    minimum: Optional[float] = None,
    maximum: Optional[float] = None,
    exclusive_minimum: bool = False,
    exclusive_maximum: bool = False,
) -> RangeValidator:
    """
    Create a validator checking that a number lies in a range.

    Args:
        minimum: a lower bound, if any
        maximum: an upper bound, if any
        exclusive_minimum: a flag indicating whether the lower bound is excluded
        exclusive_maximum: a flag indicating whether the upper bound is excluded

    Returns:
        a validator
    """
    return RangeValidator(
        minimum=minimum,
        maximum=maximum,
        exclusive_minimum=exclusive_minimum,
        exclusive_maximum=exclusive_maximum,
    )


probability_validator = range_validator(
    minimum=0.0,
    maximum=1.0,
)
positive_validator = range_validator(
    minimum=0,
    exclusive_minimum=True,
)
non_negative_validator = range_validator(
    minimum=0,
)


@dataclass(frozen=True)
class ChoiceValidator:
    """A validator checking that a value is one of some choices."""

    choices: Tuple[Any, ...]

    def __call__(
        self,
        value: Any,
    ) -> None:
        """
        Validate the given value.

        Args:
            value: the value to be validated

        Raises:
            ValidatorError: if the value is not one of the choices
        """
        if value not in self.choices:
            expected = ", ".join(repr(choice) for choice in self.choices)
            raise ValidatorError(f"{repr(value)} is not one of {expected}")

    def as_schema(self) -> Dict[str, Any]:
        """
        Get the JSON schema keywords of the choices.

        Returns:
            the keywords
        """
        return {
            "enum": list(self.choices),
        }


def choice_validator(
    choices: Collection[Any],
) -> ChoiceValidator:
    """
    Create a validator checking that a value is one of the given choices.

    Args:
        choices: the accepted values

    Returns:
        a validator
    """
    return ChoiceValidator(
        choices=tuple(choices),
    )



def validator_schema(
    validator: Optional[Any],
) -> Dict[str, Any]:
    """
    Get the JSON schema keywords describing what a validator accepts.

    Args:
        validator: a validator, if any

    Returns:
        the keywords ; empty for validators without a schema counterpart
    """
    as_schema = getattr(validator, "as_schema", None)
    if as_schema is None:
        return {}
    return dict(as_schema())
