"""Error related models and functions."""
from typing import Optional

from filtersem.core.exceptions import CoreException


class CliError(CoreException):
    """A CLI error."""


def exit_code(
    error: BaseException,
) -> int:
    """
    Get the exit code of an error.

    The code is the one of the first error of the cause chain belonging to a category (configuration, data or numeric).

    Args:
        error: an error

    Returns:
        the exit code ; 1 when no error of the chain has a category
    """
    current: Optional[BaseException] = error
    while current is not None:
        code = getattr(current, "exit_code", CoreException.exit_code)
        if code != CoreException.exit_code:
            return int(code)
        current = current.__cause__
    return CoreException.exit_code
