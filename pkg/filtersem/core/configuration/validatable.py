"""Models and classes related to validatable objects."""
from abc import (
    ABC,
    abstractmethod,
)


class Validatable(ABC):
    """An object checking its own consistency."""

    @abstractmethod
    def validate(self) -> None:
        """Validate the object."""
