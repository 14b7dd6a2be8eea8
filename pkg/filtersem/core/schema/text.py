"""Models and functions used for the plain text schema."""
import json
from typing import (
    Any,
    Dict,
    List,
)

from filtersem.core.schema.error import SchemaError
from filtersem.core.schema.json import root_configuration_as_json_schema


Json = Dict[str, Any]


def root_configuration_as_text() -> str:
    """
    Get a text schema for RootConfiguration.

    Every key is listed with its dotted path, the one accepted by `--set`.

    Raises:
        SchemaError: if an error occurred during the creation of the schema

    Returns:
        the schema
    """
    try:
        schema: Json = json.loads(root_configuration_as_json_schema())
    except (TypeError, ValueError) as load_error:
        raise SchemaError("JSON load error") from load_error
    lines = [
        schema.get("title", ""),
        schema.get("description", ""),
        "",
    ]
    lines.extend(
        _object_to_lines(
            schema=schema,
            definitions=schema.get("definitions", {}),
            prefix="",
        ),
    )
    return "\n".join(lines)


def _resolve(
    schema: Json,
    definitions: Json,
) -> Json:
    ref = schema.get("$ref")
    if ref:
        return definitions[ref.replace("#/definitions/", "")]
    return schema


def _object_to_lines(
    schema: Json,
    definitions: Json,
    prefix: str,
) -> List[str]:
    lines = []
    required = schema.get("required", [])
    for name, property_schema in schema.get("properties", {}).items():
        path = f"{prefix}{name}"
        resolved = _resolve(
            schema=property_schema,
            definitions=definitions,
        )
        lines.append(
            _describe(
                path=path,
                schema=property_schema,
                resolved=resolved,
                required=name in required,
            ),
        )
        if resolved.get("type") == "object" and "properties" in resolved:
            lines.extend(
                _object_to_lines(
                    schema=resolved,
                    definitions=definitions,
                    prefix=f"{path}.",
                ),
            )
        for pattern_schema in resolved.get("patternProperties", {}).values():
            item = _resolve(
                schema=pattern_schema,
                definitions=definitions,
            )
            lines.extend(
                _object_to_lines(
                    schema=item,
                    definitions=definitions,
                    prefix=f"{path}.<name>.",
                ),
            )
        items = resolved.get("items")
        if items:
            item = _resolve(
                schema=items,
                definitions=definitions,
            )
            lines.extend(
                _object_to_lines(
                    schema=item,
                    definitions=definitions,
                    prefix=f"{path}[].",
                ),
            )
    return lines


def _describe(
    path: str,
    schema: Json,
    resolved: Json,
    required: bool,
) -> str:
    details = [resolved.get("type", "object")]
    bounds = _bounds(schema)
    if bounds:
        details.append(bounds)
    if "enum" in schema:
        details.append("one of " + ", ".join(json.dumps(choice) for choice in schema["enum"]))
    if "default" in schema:
        details.append(f"default {json.dumps(schema['default'])}")
    if required:
        details.append("required")
    line = f"{path} ({', '.join(details)})"
    title = schema.get("title")
    if title:
        line = f"{line}: {title}"
    description = schema.get("description")
    if description:
        line = f"{line}. {description}"
    return line


def _bounds(
    schema: Json,
) -> str:
    lower = ""
    if "minimum" in schema:
        lower = f"[{schema['minimum']}"
    elif "exclusiveMinimum" in schema:
        lower = f"]{schema['exclusiveMinimum']}"
    upper = ""
    if "maximum" in schema:
        upper = f"{schema['maximum']}]"
    elif "exclusiveMaximum" in schema:
        upper = f"{schema['exclusiveMaximum']}["
    if not lower and not upper:
        return ""
    return f"in {lower or ']-inf'}, {upper or '+inf['}"
