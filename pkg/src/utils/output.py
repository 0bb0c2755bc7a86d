"""CSV and JSON-lines writers with deterministic formatting."""

import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

from ..config import config


def format_number(value: Any, digits: Optional[int] = None) -> str:
    """Round-trip decimal text for floats; other values via str()."""
    digits = config.csv_digits if digits is None else digits
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{digits}g}"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if getattr(value, "ndim", 0) > 0 and hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    if hasattr(value, "item") and callable(value.item):
        return _jsonable(value.item())
    return value


def render_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str], digits: Optional[int] = None) -> str:
    """
    Render rows as CSV text with a header and LF line endings.

    Args:
        rows: Dictionaries keyed by column name
        columns: Column order
        digits: Significant digits for floats (default from config)

    Returns:
        CSV text
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_number(row.get(column), digits) for column in columns])
    return buffer.getvalue()


def render_json_lines(records: Iterable[Dict[str, Any]]) -> str:
    """One JSON object per line, keys sorted, non-finite floats as strings."""
    lines = [json.dumps(_jsonable(record), sort_keys=True, ensure_ascii=False) for record in records]
    return "".join(line + "\n" for line in lines)


def render_json(value: Any, indent: Optional[int] = 2) -> str:
    """A single strict JSON document; non-finite floats become strings."""
    return json.dumps(_jsonable(value), indent=indent, ensure_ascii=False, allow_nan=False, default=str)


def write_text(text: str, path: Optional[str], stream: TextIO) -> None:
    """Write to path (UTF-8, LF) or to the given stream."""
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        stream.write(text)


def columns_of(rows: List[Dict[str, Any]]) -> List[str]:
    """Column names in first-seen order."""
    seen: Dict[str, None] = {}
    for row in rows:
        for key in row:
            seen.setdefault(key, None)
    return list(seen)
