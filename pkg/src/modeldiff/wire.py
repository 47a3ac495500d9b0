"""Deterministic JSON serialization for the HTTP API.

Golden-file tests compare response bodies byte for byte, so serialization
cannot depend on interpreter details: floats are always rendered with 17
significant digits (enough to round-trip any double), keys keep insertion
order, and there is no whitespace variance.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np


def _render(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True or obj is False or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            raise ValueError(f"non-finite float {f!r} in wire payload")
        out.append(format(f, ".17g"))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise TypeError(f"wire object keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _render(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        items = obj.tolist() if isinstance(obj, np.ndarray) else obj
        out.append("[")
        for i, value in enumerate(items):
            if i:
                out.append(",")
            _render(value, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} for the wire")


def dumps(obj: Any) -> str:
    """Serialize a payload to canonical JSON text."""
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def dumps_bytes(obj: Any) -> bytes:
    return dumps(obj).encode("utf-8")
