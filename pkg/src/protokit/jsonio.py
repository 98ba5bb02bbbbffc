"""Strict JSON parsing, structural comparison and fenced-block extraction.

JSON values are plain Python objects: dict (insertion-ordered), list, str,
int, float, bool and None.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass

REL_TOL = 1e-9


class JsonSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class DuplicateKey(ValueError):
    def __init__(self, path: tuple):
        super().__init__(f"duplicate key at {format_path(path)}")
        self.path = path


class NoBlockFound(ValueError):
    pass


class _Pairs(list):
    """Raw key/value pairs of one object, before duplicate checking."""


def _reject_constant(name):
    raise ValueError(f"non-finite number {name}")


def _finite_float(text):
    x = float(text)
    if not math.isfinite(x):
        raise ValueError(f"number out of range {text}")
    return x


def parse_json(text: str):
    """Parse strict JSON; duplicate keys and non-finite numbers are errors."""
    try:
        raw = json.loads(
            text,
            object_pairs_hook=_Pairs,
            parse_constant=_reject_constant,
            parse_float=_finite_float,
        )
    except json.JSONDecodeError as e:
        raise JsonSyntaxError(e.msg, e.pos) from None
    except ValueError as e:
        raise JsonSyntaxError(str(e), 0) from None
    return _build(raw, ())


def _build(v, path):
    if type(v) is _Pairs:
        out = {}
        for k, x in v:
            if k in out:
                raise DuplicateKey(path + (k,))
            out[k] = _build(x, path + (k,))
        return out
    if type(v) is list:
        return [_build(x, path + (i,)) for i, x in enumerate(v)]
    return v


def format_path(path) -> str:
    if not path:
        return "$"
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)


@dataclass(frozen=True)
class Diff:
    path: tuple
    kind: str  # Missing | Extra | TypeMismatch | ValueMismatch

    def __str__(self):
        return f"{self.kind} at {format_path(self.path)}"


def _kind(v) -> str:
    if v is None:
        return "null"
    if type(v) is bool:
        return "bool"
    if type(v) in (int, float):
        return "number"
    if type(v) is str:
        return "text"
    if type(v) is list:
        return "array"
    if type(v) is dict:
        return "object"
    raise TypeError(f"not a JSON value: {v!r}")


def numbers_equal(a, b) -> bool:
    if type(a) is int and type(b) is int:
        return a == b
    if a == b:
        return True
    return abs(a - b) <= REL_TOL * max(abs(a), abs(b))


def compare(expected, actual) -> list[Diff]:
    """Structural differences between two values; an empty list means Equal.

    Object key order is ignored, array order is significant, an integer equals
    a float of the same value, and numbers involving a float are compared with
    a relative tolerance of 1e-9.
    """
    diffs: list[Diff] = []
    _compare(expected, actual, (), diffs)
    return diffs


def _compare(a, b, path, out):
    ka, kb = _kind(a), _kind(b)
    if ka != kb:
        out.append(Diff(path, "TypeMismatch"))
        return
    if ka == "object":
        for k in a:
            if k not in b:
                out.append(Diff(path + (k,), "Missing"))
            else:
                _compare(a[k], b[k], path + (k,), out)
        for k in b:
            if k not in a:
                out.append(Diff(path + (k,), "Extra"))
    elif ka == "array":
        for i in range(min(len(a), len(b))):
            _compare(a[i], b[i], path + (i,), out)
        for i in range(len(b), len(a)):
            out.append(Diff(path + (i,), "Missing"))
        for i in range(len(a), len(b)):
            out.append(Diff(path + (i,), "Extra"))
    elif ka == "number":
        if not numbers_equal(a, b):
            out.append(Diff(path, "ValueMismatch"))
    elif a != b:
        out.append(Diff(path, "ValueMismatch"))


def equal(expected, actual) -> bool:
    return not compare(expected, actual)


def _normalize(v):
    # integral floats print as integers so that 1 and 1.0 serialize alike
    if type(v) is float and v.is_integer() and abs(v) < 2**53:
        return int(v)
    if type(v) is dict:
        return {k: _normalize(x) for k, x in v.items()}
    if type(v) is list:
        return [_normalize(x) for x in v]
    return v


def canonical_dumps(value) -> str:
    """Compact serialization with sorted keys; UTF-8 safe (no ASCII escaping)."""
    return json.dumps(_normalize(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def canonical_bytes(value) -> bytes:
    return canonical_dumps(value).encode("utf-8")


_FENCE = re.compile(r"```[ \t]*([A-Za-z0-9_+-]*)[ \t]*\r?\n(.*?)```", re.S)


def extract_fenced(text: str, tag: str) -> str:
    """Content of the last fenced block labelled ``tag`` (case-insensitive)."""
    tag = tag.lower()
    found = None
    for m in _FENCE.finditer(text):
        if m.group(1).lower() == tag:
            found = m.group(2)
    if found is None:
        raise NoBlockFound(f"no ```{tag} block found")
    return found.rstrip("\n").rstrip("\r")
