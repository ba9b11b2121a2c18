"""Output formatting utilities for canonical JSON and CSV."""

import csv
import io
import json
import logging
import math
from typing import Any

import numpy as np

from .config import FLOAT_SIGNIFICANT_DIGITS
from .exceptions import FileFormatError

logger = logging.getLogger(__name__)


def format_float(value: float) -> str:
    """
    Format a float with a fixed number of significant digits.

    Non-finite values are written as "nan", "inf" or "-inf".
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, f".{FLOAT_SIGNIFICANT_DIGITS}g")


def _encode(value: Any, level: int, indent: int) -> str:
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    match value:
        case None:
            return "null"
        case bool() | np.bool_():
            return "true" if value else "false"
        case int() | np.integer():
            return str(int(value))
        case float() | np.floating():
            if not math.isfinite(value):
                raise FileFormatError(f"Cannot write non-finite number {value} to JSON")
            return format_float(value)
        case str():
            return json.dumps(value, ensure_ascii=False)
        case np.ndarray():
            return _encode(value.tolist(), level, indent)
        case dict():
            if not value:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {_encode(value[k], level + 1, indent)}" for k in sorted(value)]
            return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
        case list() | tuple():
            if not value:
                return "[]"
            items = [f"{pad}{_encode(v, level + 1, indent)}" for v in value]
            return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
        case _:
            raise FileFormatError(f"Cannot write value of type {type(value).__name__} to JSON")


def format_json_output(data: dict[str, Any] | list[Any], indent: int = 2) -> str:
    """
    Format data as canonical JSON text.

    Keys are sorted, floats carry 17 significant digits and the text ends
    with a newline, so equal data always produces identical bytes.

    Args:
        data: Data to format (numpy arrays and scalars allowed)
        indent: Indentation width

    Returns:
        Formatted JSON string
    """
    return _encode(data, 0, indent) + "\n"


def parse_json(text: str, source: str = "input") -> Any:
    """
    Parse JSON text.

    Raises:
        FileFormatError: If the text is not valid JSON
    """
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        logger.error(f"Failed to parse JSON from {source}: {e}")
        raise FileFormatError(f"{source}: invalid JSON: {e}") from e


def validate_json_structure(
    data: Any,
    required_keys: list[str],
    context: str,
) -> None:
    """
    Validate that a JSON object contains the required keys.

    Args:
        data: Parsed JSON value
        required_keys: Keys that must be present
        context: Field path used in error messages (e.g. "correspondences[3]")

    Raises:
        FileFormatError: If ``data`` is not an object or a required key is missing
    """
    if not isinstance(data, dict):
        raise FileFormatError(f"{context}: expected an object, got {type(data).__name__}")
    missing_keys = [key for key in required_keys if key not in data]
    if missing_keys:
        raise FileFormatError(f"{context}: missing field '{missing_keys[0]}'")


def format_csv(header: list[str], rows: list[list[Any]]) -> str:
    """
    Format rows as CSV text with a header line.

    Floats use ``format_float``; None becomes an empty cell.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else format_float(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()
