"""Declarative payload validation.

Schemas live in ``schemas.json`` next to this module: per-operation required
and optional fields with type tags, enumerations, nested objects, lists, and
key-whitelisted maps. Unknown fields are rejected everywhere. Failures are
reported as field-path diagnostics.
"""

from __future__ import annotations

import json
from datetime import date
from importlib import resources


def _load_raw() -> dict:
    text = resources.files(__package__).joinpath("schemas.json").read_text("utf-8")
    return json.loads(text)


class SchemaRegistry:
    def __init__(self, raw: dict | None = None):
        raw = raw if raw is not None else _load_raw()
        entities = raw.get("entities", {})
        self._schemas: dict[str, dict] = {}
        for op_name, spec in raw.get("operations", {}).items():
            if "entity" in spec:
                entity = entities[spec["entity"]]
                if spec.get("mode") == "update":
                    # Updates are partial: every field becomes optional.
                    resolved = {
                        "required": {},
                        "optional": {**entity["required"], **entity["optional"]},
                    }
                else:
                    resolved = entity
                self._schemas[op_name] = resolved
            else:
                self._schemas[op_name] = spec

    def schema_ids(self) -> list[str]:
        return sorted(self._schemas)

    def validate(self, schema_id: str, payload: dict) -> list[str]:
        """Returns a list of field-path diagnostics; empty means conformant."""
        schema = self._schemas.get(schema_id)
        if schema is None:
            return [f"no schema declared for operation {schema_id!r}"]
        errors: list[str] = []
        _check_object(schema, payload, path="", errors=errors)
        return errors


def _check_object(schema: dict, value, path: str, errors: list[str]) -> None:
    if not isinstance(value, dict):
        errors.append(f"{path or 'payload'}: expected an object")
        return
    required = schema.get("required", {})
    optional = schema.get("optional", {})
    known = set(required) | set(optional)
    for name in required:
        if name not in value:
            errors.append(f"{_join(path, name)}: required field missing")
    for name, item in value.items():
        if name not in known:
            errors.append(f"{_join(path, name)}: unknown field")
            continue
        _check_value(required.get(name) or optional[name], item, _join(path, name), errors)


def _check_value(tag, value, path: str, errors: list[str]) -> None:
    if isinstance(tag, str):
        _check_scalar(tag, value, path, errors)
        return
    if "enum" in tag:
        if value not in tag["enum"]:
            errors.append(f"{path}: must be one of {', '.join(tag['enum'])}")
    elif "list" in tag:
        if not isinstance(value, list):
            errors.append(f"{path}: expected a list")
            return
        for i, item in enumerate(value):
            _check_value(tag["list"], item, f"{path}[{i}]", errors)
    elif "object" in tag:
        _check_object(tag["object"], value, path, errors)
    elif "map_keys" in tag:
        if not isinstance(value, dict):
            errors.append(f"{path}: expected a map")
            return
        allowed = set(tag["map_keys"])
        for key, item in value.items():
            if key not in allowed:
                errors.append(f"{path}.{key}: key not in whitelist")
            else:
                _check_value(tag["values"], item, f"{path}.{key}", errors)
    else:
        errors.append(f"{path}: unsupported schema tag {tag!r}")


def _check_scalar(tag: str, value, path: str, errors: list[str]) -> None:
    if tag == "string":
        if not isinstance(value, str):
            errors.append(f"{path}: expected a string")
    elif tag == "boolean":
        if not isinstance(value, bool):
            errors.append(f"{path}: expected a boolean")
    elif tag == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            errors.append(f"{path}: expected a number")
    elif tag == "date":
        if not isinstance(value, str) or not _is_calendar_date(value):
            errors.append(f"{path}: not a calendar date (expected YYYY-MM-DD)")
    else:
        errors.append(f"{path}: unsupported type tag {tag!r}")


def _is_calendar_date(value: str) -> bool:
    try:
        date.fromisoformat(value)
        return True
    except ValueError:
        return False


def _join(path: str, name: str) -> str:
    return f"{path}.{name}" if path else name
