"""Models and functions used for loading/writing configuration files."""
import os
from typing import (
    Callable,
    Dict,
    Iterable,
    Optional,
    OrderedDict,
    TextIO,
    Tuple,
)

from filtersem.core.configuration.error import BaseAttributeError
from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.documents import (
    JSON_CODEC,
    YAML_CODEC,
    DocumentCodec,
    parse_scalar,
)
from filtersem.core.exceptions import ConfigurationError
from filtersem.core.loader import RootConfigurationLoader
from filtersem.core.schema.json import root_configuration_as_json_schema
from filtersem.core.schema.text import root_configuration_as_text


WORKERS_ENVIRONMENT_VARIABLE = "FS_WORKERS"

SchemaDumper = Callable[[], str]

AVAILABLE_FORMATS: Dict[str, DocumentCodec] = OrderedDict[str, DocumentCodec](
    (codec.name, codec)
    for codec in (
        YAML_CODEC,
        JSON_CODEC,
    )
)

AVAILABLE_SCHEMA_DUMP_FORMATS: Dict[str, SchemaDumper] = OrderedDict[str, SchemaDumper](
    {
        "text": root_configuration_as_text,
        "json": root_configuration_as_json_schema,
    }
)


def get_root_configuration_loader(
    file_format: str,
) -> RootConfigurationLoader:
    """
    Get a configuration loader for the given format.

    Args:
        file_format: a file format

    Returns:
        a configuration loader

    Raises:
        ConfigurationError: is the format is not supported
    """
    codec = AVAILABLE_FORMATS.get(file_format)
    if codec is None:
        raise ConfigurationError(f"Unsupported file format {file_format}.")
    return RootConfigurationLoader(
        codec=codec,
    )


def guess_format(
    file_name: str,
) -> Optional[str]:
    """
    Guess the format of a file from its extension.

    Args:
        file_name: a file name

    Returns:
        the format name, if any
    """
    extension = os.path.splitext(file_name)[1].lstrip(".").lower()
    for name, codec in AVAILABLE_FORMATS.items():
        if extension in codec.extensions:
            return name
    return None


def load_configuration(
    config_format: str,
    config_file: str,
) -> RootConfiguration:
    """
    Load a configuration file.

    Args:
        config_format: a file format
        config_file: a file

    Returns:
        a configuration

    Raises:
        ConfigurationError: if the configuration couldn't be loaded
    """
    loader = get_root_configuration_loader(
        file_format=config_format,
    )
    try:
        with open(config_file, "r") as f:
            return loader.load(
                stream=f,
            )
    except FileNotFoundError as e:
        raise ConfigurationError("Configuration file not found") from e
    except BaseAttributeError as e:
        raise ConfigurationError("Configuration invalid") from e


def apply_overrides(
    configuration: RootConfiguration,
    overrides: Iterable[str],
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    output_dir: Optional[str] = None,
) -> RootConfiguration:
    """
    Apply the command line overrides to a configuration.

    The worker count comes from the flag, then from the `FS_WORKERS` environment variable, then from the file.

    Args:
        configuration: a configuration
        overrides: `section.key=value` strings, values written as YAML scalars
        seed: a seed overriding the configured one
        workers: a worker count overriding the configured one
        output_dir: an output directory overriding the configured one

    Returns:
        the configuration

    Raises:
        ConfigurationError: if an override is malformed
    """
    for override in overrides:
        path, value = _split_override(
            override=override,
        )
        try:
            configuration.override(
                path=path,
                value=parse_scalar(value),
            )
        except (BaseAttributeError, TypeError) as e:
            raise ConfigurationError(f"Unable to apply override {repr(override)}") from e
    if seed is not None:
        configuration.seed = seed
    if output_dir is not None:
        configuration.output = output_dir
    if workers is None:
        workers = _workers_from_environment()
    if workers is not None:
        configuration.workers = workers
    return configuration


def _split_override(
    override: str,
) -> Tuple[str, str]:
    path, separator, value = override.partition("=")
    if not separator or not path.strip():
        raise ConfigurationError(f"Malformed override {repr(override)} ; expecting section.key=value")
    return path.strip(), value


def _workers_from_environment() -> Optional[int]:
    raw = os.environ.get(WORKERS_ENVIRONMENT_VARIABLE)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{WORKERS_ENVIRONMENT_VARIABLE} must be an integer ; got {repr(raw)}") from e


def write_message(
    stream: TextIO,
    message: str,
    end: str = "\n",
) -> None:
    """
    Write a message on the stream.

    Args:
        stream: a stream
        message: a message
        end: a string appended after the message, default a newline
    """
    stream.write(message)
    if end:
        stream.write(end)
    stream.flush()
