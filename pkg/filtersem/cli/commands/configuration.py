"""Models and functions for loading the run configuration of a CLI command."""
import argparse

from filtersem.cli.error import CliError
from filtersem.core.configuration.error import BaseAttributeError
from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.core import (
    apply_overrides,
    guess_format,
    load_configuration,
)


DEFAULT_FORMAT = "yaml"


def configuration_format(
    args: argparse.Namespace,
) -> str:
    """
    Get the format of the configuration file of a command.

    Args:
        args: command line arguments

    Returns:
        the flag value, or the format guessed from the file extension, or yaml
    """
    return str(args.config_format or guess_format(args.config_file) or DEFAULT_FORMAT)


def load_run_configuration(
    args: argparse.Namespace,
) -> RootConfiguration:
    """
    Load, override and validate the configuration of a command.

    Args:
        args: command line arguments

    Returns:
        the effective configuration

    Raises:
        CliError: if the configuration is invalid
    """
    configuration = apply_overrides(
        configuration=load_configuration(
            config_format=configuration_format(args),
            config_file=args.config_file,
        ),
        overrides=getattr(args, "overrides", None) or [],
        seed=getattr(args, "seed", None),
        workers=getattr(args, "workers", None),
        output_dir=getattr(args, "output_dir", None),
    )
    try:
        configuration.validate()
    except BaseAttributeError as e:
        raise CliError("Invalid configuration") from e
    return configuration
