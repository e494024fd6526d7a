"""JSON file formats for structures and diffeomorphisms.

Structure file::

    {"n": 2, "S": [["0", "0", "-1", "0"], ...]}

Diffeomorphism file::

    {"n": 2, "f": ["x1 + x2^2", ...], "f_inv": ["x1 - x2^2", ...]}

``f_inv`` is optional; when present the loader checks that it inverts ``f``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .diffeo import PolyDiffeo
from .jets import TensorField
from .polynomial import ParseError, parse_polynomial

__all__ = [
    "FormatError",
    "structure_from_json",
    "structure_to_json",
    "diffeo_from_json",
    "diffeo_to_json",
    "load_structure",
    "load_diffeo",
    "dump_json",
    "parse_point",
]


class FormatError(ValueError):
    """A file does not match the expected schema."""


def _read(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    return data


def _half_dim(data: dict) -> int:
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"'n' must be a positive integer, got {n!r}")
    return n


def _poly_list(items, d: int, what: str) -> list:
    if not isinstance(items, list) or len(items) != d:
        raise FormatError(f"{what} must be a list of {d} polynomial strings")
    out = []
    for s in items:
        if not isinstance(s, str):
            raise FormatError(f"{what} entries must be strings, got {s!r}")
        try:
            out.append(parse_polynomial(s, d))
        except ParseError as exc:
            raise FormatError(f"bad polynomial {s!r} in {what}: {exc}") from exc
    return out


def structure_from_json(data: dict) -> TensorField:
    n = _half_dim(data)
    d = 2 * n
    rows = data.get("S")
    if not isinstance(rows, list) or len(rows) != d:
        raise FormatError(f"'S' must be a {d}x{d} matrix")
    S = tuple(tuple(_poly_list(row, d, f"row {i + 1} of S")) for i, row in enumerate(rows))
    return TensorField.from_entries(n, S)


def structure_to_json(S: TensorField) -> dict:
    return {"n": S.n, "S": [[str(e) for e in row] for row in S.S]}


def diffeo_from_json(data: dict) -> PolyDiffeo:
    n = _half_dim(data)
    d = 2 * n
    f = _poly_list(data.get("f"), d, "'f'")
    g = None
    if data.get("f_inv") is not None:
        g = _poly_list(data["f_inv"], d, "'f_inv'")
    try:
        return PolyDiffeo(tuple(f), None if g is None else tuple(g))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def diffeo_to_json(f: PolyDiffeo) -> dict:
    out = {"n": f.n, "f": [str(p) for p in f.f]}
    if f.f_inv is not None:
        out["f_inv"] = [str(p) for p in f.f_inv]
    return out


def load_structure(path) -> TensorField:
    return structure_from_json(_read(path))


def load_diffeo(path) -> PolyDiffeo:
    return diffeo_from_json(_read(path))


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def parse_point(text: str, d: int) -> tuple:
    """``"1,-2,1/3,0"`` -> tuple of Fractions; checks the coordinate count."""
    parts = [s.strip() for s in text.split(",")]
    try:
        point = tuple(Fraction(s) for s in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad point {text!r}: {exc}") from exc
    if len(point) != d:
        raise FormatError(f"point has {len(point)} coordinates, expected {d}")
    return point
