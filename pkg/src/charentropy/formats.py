"""Stable serialization helpers shared by the CLI and reports.

Two rules keep artifacts diffable and reproducible:

* floats print with 12 significant digits, everywhere (``fmt_float``), and
  JSON numbers are round-tripped through that representation, so a value
  shown in a CSV and the same value in a JSON report are byte-equal;
* JSON is emitted with a fixed layout (two-space indent, no trailing
  whitespace, one trailing newline, keys in insertion order) so reruns are
  byte-identical.

Machine-readable outputs carry ``schema_version`` so downstream scripts can
detect layout changes.
"""

from __future__ import annotations

import hashlib
import json

SCHEMA_VERSION = 1


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def round_float(x: float) -> float:
    return float(fmt_float(x))


def round_floats(obj):
    """Recursively apply the 12-significant-digit rule to every float."""
    if isinstance(obj, float):
        return round_float(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def json_dumps(obj) -> str:
    return json.dumps(round_floats(obj), indent=2, ensure_ascii=False) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()
