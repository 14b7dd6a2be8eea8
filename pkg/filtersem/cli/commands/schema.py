"""Models and functions for CLI schema dump."""
import argparse
import sys

from filtersem.cli.error import CliError
from filtersem.core.core import (
    AVAILABLE_SCHEMA_DUMP_FORMATS,
    write_message,
)
from filtersem.core.schema.error import SchemaError


def dump_schema(
    args: argparse.Namespace,
) -> None:
    """
    Dump a schema of the structure of the configuration files.

    Args:
        args: command line arguments

    Raises:
        CliError: if an error occurred
    """
    dumper = AVAILABLE_SCHEMA_DUMP_FORMATS.get(args.output_format)
    if not dumper:
        raise CliError(f"Unsupported schema dump format {repr(args.output_format)}")
    try:
        schema = dumper()
    except SchemaError as e:
        raise CliError("Schema error") from e
    write_message(
        message=schema,
        stream=sys.stdout,
    )
