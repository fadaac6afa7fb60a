"""Deterministic result serialization.

JSON reports and CSV tables are written so that identical inputs give
byte-identical files: floats carry 17 significant digits (enough to
round-trip IEEE doubles), keys keep insertion order, and the only
non-reproducible field, the UTC timestamp, can be suppressed.

CSV files follow RFC 4180 (comma separator, '.' decimal, header row, CRLF
line endings).  RFC 4180 leaves no room for comments, so the provenance that
JSON reports embed inline (resolved config, seed) accompanies each CSV as a
``<name>.meta.json`` sidecar.
"""

from __future__ import annotations

import datetime
import math
import os


def format_float(value: float) -> str:
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return f"{value:.17g}"


def _json_escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    return "".join(out)


def dumps(obj, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data with 17-digit floats."""
    pad = "  " * indent
    child_pad = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return f'"{_json_escape(obj)}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f'{child_pad}"{_json_escape(str(k))}": {dumps(v, indent + 1)}'
                for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{child_pad}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    # numpy scalars and similar
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def timestamp_utc() -> str:
    return datetime.datetime.now(datetime.timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_json(path: str, payload: dict, with_timestamp: bool = True) -> None:
    body = dict(payload)
    if with_timestamp:
        body["generated_at"] = timestamp_utc()
    with open(path, "w", newline="") as fh:
        fh.write(dumps(body) + "\n")


def write_csv(path: str, header: list[str], rows, meta: dict | None = None,
              with_timestamp: bool = True) -> None:
    """Write an RFC 4180 table; provenance goes to a .meta.json sidecar."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, bool):
                cells.append("true" if cell else "false")
            elif isinstance(cell, float):
                cells.append(format_float(cell))
            elif isinstance(cell, int):
                cells.append(str(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    with open(path, "w", newline="") as fh:
        fh.write("\r\n".join(lines) + "\r\n")
    if meta is not None:
        base, _ = os.path.splitext(path)
        write_json(base + ".meta.json", {"columns": list(header), **meta},
                   with_timestamp=with_timestamp)
