"""Run configuration documents: the YAML and JSON codecs and command-line scalars."""
import json
from dataclasses import dataclass
from typing import (
    Any,
    Callable,
    FrozenSet,
    TextIO,
)

from ruamel.yaml import YAML
from ruamel.yaml.error import YAMLError

from filtersem.core.exceptions import ConfigurationError


class DocumentError(ConfigurationError):
    """A configuration document that could not be read or written."""


@dataclass(frozen=True)
class DocumentCodec:
    """How one document format is read, written and recognized from a file name."""

    name: str
    extensions: FrozenSet[str]
    read: Callable[[TextIO], Any]
    write: Callable[[Any, TextIO], None]


def _safe_yaml() -> YAML:
    yaml = YAML(typ="safe", pure=True)
    yaml.default_flow_style = False
    return yaml


def read_yaml(
    stream: TextIO,
) -> Any:
    """
    Read a YAML document.

    Args:
        stream: a stream

    Returns:
        the document, None when empty

    Raises:
        DocumentError: if the document is not valid YAML
    """
    try:
        return _safe_yaml().load(stream.read())
    except YAMLError as e:
        raise DocumentError("YAML load error") from e


def write_yaml(
    data: Any,
    stream: TextIO,
) -> None:
    """
    Write a document as block-style YAML.

    Args:
        data: plain data (mappings, lists and scalars)
        stream: a stream

    Raises:
        DocumentError: if the data has no YAML representation
    """
    try:
        _safe_yaml().dump(
            data=data,
            stream=stream,
        )
    except YAMLError as e:
        raise DocumentError("YAML dump error") from e


def read_json(
    stream: TextIO,
) -> Any:
    """
    Read a JSON document.

    Args:
        stream: a stream

    Returns:
        the document, None when the stream is blank

    Raises:
        DocumentError: if the document is not valid JSON
    """
    text = stream.read()
    if not text.strip():
        return None
    try:
        return json.loads(text)
    except ValueError as e:
        raise DocumentError("JSON load error") from e


def write_json(
    data: Any,
    stream: TextIO,
) -> None:
    """
    Write a document as indented JSON, ending with a newline.

    Args:
        data: plain data (mappings, lists and scalars)
        stream: a stream

    Raises:
        DocumentError: if the data has no JSON representation
    """
    try:
        text = json.dumps(data, indent=2)
    except (TypeError, ValueError) as e:
        raise DocumentError("JSON dump error") from e
    stream.write(f"{text}\n")


YAML_CODEC = DocumentCodec(
    name="yaml",
    extensions=frozenset({"yaml", "yml"}),
    read=read_yaml,
    write=write_yaml,
)

JSON_CODEC = DocumentCodec(
    name="json",
    extensions=frozenset({"json"}),
    read=read_json,
    write=write_json,
)


def parse_scalar(
    text: str,
) -> Any:
    """
    Parse a command-line override value the way a YAML document would.

    Args:
        text: a scalar written as in a YAML document (e.g. `0.5`, `true`, `[conv1, conv2]`)

    Returns:
        the parsed value

    Raises:
        DocumentError: if the text is not valid YAML
    """
    try:
        return _safe_yaml().load(text)
    except YAMLError as e:
        raise DocumentError(f"Unable to parse value {text!r}") from e
