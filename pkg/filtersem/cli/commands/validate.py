"""Models and functions for CLI validation."""
import argparse
import sys

from filtersem.cli.commands.configuration import (
    configuration_format,
    load_run_configuration,
)
from filtersem.core.core import (
    get_root_configuration_loader,
    write_message,
)


def validate(
    args: argparse.Namespace,
) -> None:
    """
    Validate a configuration file with its overrides.

    Args:
        args: command line arguments
    """
    configuration = load_run_configuration(args)
    if not getattr(args, "dump", False):
        write_message(
            stream=sys.stdout,
            message=f"Configuration {args.config_file} is valid.",
        )
        return
    get_root_configuration_loader(
        file_format=configuration_format(args),
    ).dump(
        configuration=configuration,
        stream=sys.stdout,
        effective=True,
    )
    sys.stdout.flush()
