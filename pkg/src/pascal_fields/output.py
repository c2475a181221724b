"""CSV and JSON emission shared by reports and the CLI.

Conventions: exact integers and rationals are written as decimal strings
("123", "24/30"), floats with ``repr`` so they round-trip, and every JSON
document carries ``schema_version`` and the library version.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

SCHEMA_VERSION = 1


def cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def jsonable(value):
    """Recursively convert to JSON types; ints become strings once they exceed 2**53."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        v = int(value)
        return v if abs(v) <= 2 ** 53 else str(v)
    if isinstance(value, Fraction):
        return cell(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if hasattr(value, "value"):          # enums
        return value.value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([cell(v) for v in row])
    return buf.getvalue()


def json_text(payload: dict) -> str:
    from . import __version__
    body = {"schema_version": SCHEMA_VERSION, "version": __version__}
    body.update(jsonable(payload))
    return json.dumps(body, indent=2) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]
