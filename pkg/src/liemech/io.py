"""CSV and JSON emission with deterministic float formatting."""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

FLOAT_FORMAT = "%.17g"


def format_value(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return FLOAT_FORMAT % float(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(x) for x in row])
    return buf.getvalue()


def emit_csv(header, rows, path=None) -> None:
    """Write a header row and formatted data rows to ``path`` (stdout when None)."""
    text = csv_text(header, rows)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, data = rows[0], rows[1:]
    return header, np.array([[float(x) for x in r] for r in data]).reshape(len(data), len(header))


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def json_text(value) -> str:
    return json.dumps(_jsonable(value), indent=2, sort_keys=True) + "\n"


def emit_json(value, path=None) -> None:
    text = json_text(value)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def parse_json_arg(text: str):
    """Inline JSON, or the contents of a file when given ``@path`` or an existing path."""
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if Path(text).is_file():
            return json.loads(Path(text).read_text())
        raise
