"""Canonical text serialisation.

JSON and CSV output must be byte-identical across runs and worker
counts, so floats are always rendered with ``%.17g`` (shortest form
that round-trips IEEE doubles at 17 significant digits), dict key order
is preserved exactly as built, indentation is two spaces, and line
endings are LF.  The stdlib ``json`` encoder cannot be coerced into
this float format, hence the small hand-rolled emitter.
"""

import json
import math

from .errors import LcsrandError


def format_float(x):
    if math.isnan(x) or math.isinf(x):
        raise LcsrandError(f"non-finite value {x!r} in output")
    return "%.17g" % x


def _emit(obj, indent, out):
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad + "  ")
            _emit(item, indent + 1, out)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (key, value) in enumerate(items):
            out.append(pad + "  " + json.dumps(str(key)) + ": ")
            _emit(value, indent + 1, out)
            out.append(",\n" if i + 1 < len(items) else "\n")
        out.append(pad + "}")
    else:
        raise LcsrandError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    """Canonical JSON text (two-space indent, %.17g floats, LF, trailing
    newline).  ``json.loads(dumps(x))`` round-trips bit-exactly."""
    out = []
    _emit(obj, 0, out)
    out.append("\n")
    return "".join(out)


def dump_path(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    text = str(value)
    if any(c in text for c in ",\"\n\r"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def csv_text(header, rows):
    """Delimited text: header row, one line per row, LF endings."""
    lines = [",".join(_csv_cell(c) for c in header)]
    for row in rows:
        lines.append(",".join(_csv_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def csv_path(header, rows, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(header, rows))
