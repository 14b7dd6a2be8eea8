"""Models and functions used for JSON schema."""
import json
from typing import (
    Any,
    Callable,
    Dict,
    List,
    Tuple,
    Type,
)

from filtersem.core.configuration.attribute import (
    Attribute,
    AttributesContainer,
    AttributesContainerDict,
    AttributesContainerList,
    ExportableDict,
    ExportableList,
)
from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.configuration.validator import validator_schema
from filtersem.core.schema.error import SchemaError


Json = Dict[str, Any]
Definitions = Dict[str, Json]

SCHEMA_DRAFT = "http://json-schema.org/draft-07/schema"

_SCALAR_TYPES: Tuple[Tuple[Type[Any], str], ...] = (
    (bool, "boolean"),
    (int, "integer"),
    (float, "number"),
    (str, "string"),
)


def root_configuration_as_json_schema() -> str:
    """
    Get a JSON schema for RootConfiguration.

    Raises:
        SchemaError: if an error occurred during the creation of the schema

    Returns:
        the JSON schema
    """
    definitions: Definitions = {}
    schema: Json = {
        "$schema": SCHEMA_DRAFT,
        "title": "Run configuration",
        "description": "Run configuration for filtersem analyses",
        **_container_schema(
            container_type=RootConfiguration,
            definitions=definitions,
        ),
        "definitions": definitions,
    }
    try:
        return json.dumps(
            schema,
            indent=2,
        )
    except (TypeError, ValueError) as dump_error:
        raise SchemaError("JSON dump error") from dump_error


def _container_schema(
    container_type: Type[AttributesContainer],
    definitions: Definitions,
) -> Json:
    properties: Json = {}
    required: List[str] = []
    for name, attribute in container_type.get_attributes().items():
        if attribute.required:
            required.append(name)
        properties[name] = {
            **_describe(attribute),
            **_type_schema(
                value_type=attribute.value_type,
                definitions=definitions,
            ),
            **validator_schema(attribute.validator),
        }
    schema: Json = {
        "type": "object",
        "properties": properties,
        "additionalProperties": False,
    }
    if required:
        schema["required"] = required
    return schema


def _describe(
    attribute: Attribute[Any],
) -> Json:
    schema: Json = {}
    if attribute.short_description:
        schema["title"] = attribute.short_description
    if attribute.description:
        schema["description"] = attribute.description
    if attribute.default is not None:
        schema["default"] = attribute.default
    return schema


def _reference(
    container_type: Type[AttributesContainer],
    definitions: Definitions,
) -> Json:
    name = container_type.__name__
    if name not in definitions:
        definitions[name] = _container_schema(
            container_type=container_type,
            definitions=definitions,
        )
    return {
        "$ref": f"#/definitions/{name}",
    }


def _container_items_type(
    value_type: Type[Any],
) -> Type[AttributesContainer]:
    items_type: Type[AttributesContainer] = value_type().values_type
    return items_type


def _mapping_schema(
    value_type: Type[Any],
    definitions: Definitions,
) -> Json:
    return {
        "type": "object",
        "patternProperties": {
            ".+": _reference(
                container_type=_container_items_type(value_type),
                definitions=definitions,
            ),
        },
        "additionalProperties": False,
    }


def _sequence_schema(
    value_type: Type[Any],
    definitions: Definitions,
) -> Json:
    return {
        "type": "array",
        "items": _reference(
            container_type=_container_items_type(value_type),
            definitions=definitions,
        ),
    }


def _string_mapping_schema(
    value_type: Type[Any],
    definitions: Definitions,
) -> Json:
    return {
        "type": "object",
        "patternProperties": {
            ".*": {
                "type": "string",
            },
        },
    }


def _string_sequence_schema(
    value_type: Type[Any],
    definitions: Definitions,
) -> Json:
    return {
        "type": "array",
        "items": {
            "type": "string",
        },
    }


def _nested_schema(
    value_type: Type[Any],
    definitions: Definitions,
) -> Json:
    return _reference(
        container_type=value_type,
        definitions=definitions,
    )


# most specific first: dicts of containers are exportable dicts too
_COLLECTION_SCHEMAS: Tuple[Tuple[Type[Any], Callable[[Type[Any], Definitions], Json]], ...] = (
    (AttributesContainerDict, _mapping_schema),
    (AttributesContainerList, _sequence_schema),
    (ExportableDict, _string_mapping_schema),
    (ExportableList, _string_sequence_schema),
    (AttributesContainer, _nested_schema),
)


def _type_schema(
    value_type: Type[Any],
    definitions: Definitions,
) -> Json:
    for collection_type, to_schema in _COLLECTION_SCHEMAS:
        if issubclass(value_type, collection_type):
            return to_schema(value_type, definitions)
    for scalar_type, json_type in _SCALAR_TYPES:
        if issubclass(value_type, scalar_type):
            return {
                "type": json_type,
            }
    raise SchemaError(f"Unhandled {repr(value_type.__name__)}")
