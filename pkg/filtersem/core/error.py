"""Error related models and functions."""
import sys
import traceback
from io import StringIO
from typing import (
    List,
    Optional,
    TextIO,
)

from filtersem.core.configuration.error import (
    AttributesError,
    BaseAttributeError,
)
from filtersem.core.core import write_message


def print_error_message(
    message: str,
    stream: Optional[TextIO] = None,
    end: str = "\n",
) -> None:
    """
    Print a message on STDERR.

    Args:
        message: a message
        stream: a stream to write the message to
        end: a string appended after the message, default a newline
    """
    write_message(
        stream=stream or sys.stderr,
        message=message,
        end=end,
    )


def print_error(
    error: BaseException,
    stream: Optional[TextIO] = None,
) -> None:
    """
    Print an error and its causes on STDERR.

    Args:
        error: an error
        stream: a stream to write the error to
    """
    print_error_message(
        stream=stream or sys.stderr,
        message="\n".join(
            _get_formatted_error_items(
                error=error,
            ),
        ),
    )


def error_to_string(
    error: BaseException,
) -> str:
    """
    Get the full string representation of an error.

    Args:
        error: an error

    Returns:
        The string representation
    """
    error_stream = StringIO()
    print_error(
        stream=error_stream,
        error=error,
    )
    return error_stream.getvalue()


def _get_formatted_error_items(
    error: BaseException,
) -> List[str]:
    info = _extract_file_info(
        error=error,
    )
    items = [f"{error.__class__.__name__}: {error} ({info})"]
    if isinstance(error, AttributesError):
        items.extend(
            _get_formatted_attributes_error_items(
                error=error,
            )
        )
    cause = error.__cause__
    if cause:
        cause_items = _get_formatted_error_items(
            error=cause,
        )
        items.extend(f"  {item}" for item in cause_items)
    return items


def _extract_file_info(
    error: BaseException,
) -> str:
    stack_summary = traceback.extract_tb(error.__traceback__)
    if stack_summary:
        frame_summary = stack_summary[0]
        return f"{frame_summary.filename}:{frame_summary.lineno}"
    return "?:?"


def _get_formatted_attributes_error_items(
    error: AttributesError,
) -> List[str]:
    items = []
    for error_key, error_item in error.errors.items():
        items.append(f"  - {error_key}: {error_item}")
        if isinstance(error_item, AttributesError):
            nested = _get_formatted_attributes_error_items(
                error=error_item,
            )
            items.extend(f"    {item}" for item in nested)
        elif not isinstance(error_item, BaseAttributeError):
            items.append(f"    Nonformatted error {error_item.__class__.__name__}")
    return items
