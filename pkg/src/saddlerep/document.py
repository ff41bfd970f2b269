"""JSON document format (version 1) for DC pairs, saddle families and
approximation families.

::

    {
      "format_version": 1,
      "kind": "dc" | "saddle" | "families",
      "dim": n,
      "name": "...",            (optional)
      "description": "...",     (optional)
      "payload": ...
    }

Payloads: ``{"plus": [[...], ...], "minus": [[...], ...]}`` for ``dc``,
``{"entries": [[[...], ...], ...]}`` (rows of vectors) for ``saddle`` and
``{"upper": [gens, ...], "lower": [gens, ...]}`` for ``families``.
Numbers are written with 17 significant digits so parsing restores every
float exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .phfunc import ApproximationFamilies, DCPair, MaxOfLinear, MinOfLinear, SaddleFamily

__all__ = ["FORMAT_VERSION", "KINDS", "Document", "DocumentError", "parse", "serialize", "load", "dump"]

FORMAT_VERSION = 1
KINDS = ("dc", "saddle", "families")

Payload = Union[DCPair, SaddleFamily, ApproximationFamilies]


class DocumentError(ValueError):
    """Syntax or semantic problem in a document.

    ``line``/``column`` locate syntax errors, ``path`` (e.g.
    ``payload.entries[1]``) locates semantic ones.
    """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 path: Optional[str] = None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        elif path is not None:
            where = f" at {path}"
        super().__init__(message + where)


@dataclass(frozen=True, eq=False)
class Document:
    kind: str
    payload: Payload
    name: Optional[str] = None
    description: Optional[str] = None
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        expected = {"dc": DCPair, "saddle": SaddleFamily, "families": ApproximationFamilies}
        if self.kind not in expected:
            raise DocumentError(f"unknown kind {self.kind!r}", path="kind")
        if not isinstance(self.payload, expected[self.kind]):
            raise DocumentError(f"payload of kind {self.kind!r} must be {expected[self.kind].__name__}", path="payload")
        if self.format_version != FORMAT_VERSION:
            raise DocumentError(f"unsupported format_version {self.format_version}", path="format_version")

    @property
    def dim(self) -> int:
        return self.payload.dim

    def __eq__(self, other):
        return (
            isinstance(other, Document)
            and self.kind == other.kind
            and self.name == other.name
            and self.description == other.description
            and self.format_version == other.format_version
            and self.payload == other.payload
        )


# --------------------------------------------------------------------------
# writing
# --------------------------------------------------------------------------


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _vec(v) -> str:
    return "[" + ", ".join(_num(x) for x in v) + "]"


def _veclist(P, indent: str) -> str:
    inner = (",\n" + indent + "  ").join(_vec(v) for v in P)
    return "[\n" + indent + "  " + inner + "\n" + indent + "]"


def serialize(doc: Document) -> str:
    lines = ["{", f'  "format_version": {doc.format_version},', f'  "kind": {json.dumps(doc.kind)},',
             f'  "dim": {doc.dim},']
    if doc.name is not None:
        lines.append(f'  "name": {json.dumps(doc.name, ensure_ascii=False)},')
    if doc.description is not None:
        lines.append(f'  "description": {json.dumps(doc.description, ensure_ascii=False)},')
    p = doc.payload
    ind = "    "
    if doc.kind == "dc":
        body = (f'{ind}"plus": {_veclist(p.plus.generators, ind)},\n'
                f'{ind}"minus": {_veclist(p.minus.generators, ind)}')
    elif doc.kind == "saddle":
        rows = (",\n" + ind + "  ").join(_veclist(row, ind + "  ") for row in p.entries)
        body = f'{ind}"entries": [\n{ind}  {rows}\n{ind}]'
    else:
        def group(fs):
            return "[\n" + ind + "  " + (",\n" + ind + "  ").join(_veclist(f.generators, ind + "  ") for f in fs) + "\n" + ind + "]"
        body = f'{ind}"upper": {group(p.upper)},\n{ind}"lower": {group(p.lower)}'
    lines.append('  "payload": {\n' + body + "\n  }")
    return "\n".join(lines) + "\n}\n"


# --------------------------------------------------------------------------
# reading
# --------------------------------------------------------------------------


def _reject_constant(name):
    raise DocumentError(f"non-finite number {name} is not allowed")


def _vector(obj, dim: int, path: str) -> list:
    if not isinstance(obj, list):
        raise DocumentError("expected an array of numbers", path=path)
    if len(obj) != dim:
        raise DocumentError(f"vector has {len(obj)} coordinates, expected dim = {dim}", path=path)
    for k, x in enumerate(obj):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise DocumentError("expected a number", path=f"{path}[{k}]")
        if not math.isfinite(x):
            raise DocumentError("non-finite number", path=f"{path}[{k}]")
    return [float(x) for x in obj]


def _generators(obj, dim: int, path: str) -> np.ndarray:
    if not isinstance(obj, list):
        raise DocumentError("expected an array of vectors", path=path)
    if not obj:
        raise DocumentError("generator list is empty", path=path)
    return np.array([_vector(v, dim, f"{path}[{k}]") for k, v in enumerate(obj)])


def _field(obj: dict, key: str, path: str):
    if key not in obj:
        raise DocumentError(f"missing field {key!r}", path=path)
    return obj[key]


def parse(text: str) -> Document:
    try:
        raw = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"syntax error: {exc.msg}", line=exc.lineno, column=exc.colno) from exc
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object", path="$")
    version = _field(raw, "format_version", "$")
    if version != FORMAT_VERSION or isinstance(version, bool):
        raise DocumentError(f"unsupported format_version {version!r}", path="format_version")
    kind = _field(raw, "kind", "$")
    if kind not in KINDS:
        raise DocumentError(f"kind must be one of {KINDS}, got {kind!r}", path="kind")
    dim = _field(raw, "dim", "$")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise DocumentError(f"dim must be a positive integer, got {dim!r}", path="dim")
    for key in ("name", "description"):
        if key in raw and raw[key] is not None and not isinstance(raw[key], str):
            raise DocumentError("expected a string", path=key)
    payload = _field(raw, "payload", "$")
    if not isinstance(payload, dict):
        raise DocumentError("payload must be an object", path="payload")

    if kind == "dc":
        plus = _generators(_field(payload, "plus", "payload"), dim, "payload.plus")
        minus = _generators(_field(payload, "minus", "payload"), dim, "payload.minus")
        value: Payload = DCPair(MaxOfLinear(plus), MaxOfLinear(minus))
    elif kind == "saddle":
        grid = _field(payload, "entries", "payload")
        if not isinstance(grid, list) or not grid:
            raise DocumentError("entries must be a nonempty array of rows", path="payload.entries")
        rows = [_generators(r, dim, f"payload.entries[{i}]") for i, r in enumerate(grid)]
        width = rows[0].shape[0]
        for i, r in enumerate(rows):
            if r.shape[0] != width:
                raise DocumentError(
                    f"row {i} has {r.shape[0]} entries, expected {width} (ragged grid)",
                    path=f"payload.entries[{i}]",
                )
        value = SaddleFamily(np.stack(rows))
    else:
        def group(key, cls):
            items = _field(payload, key, "payload")
            if not isinstance(items, list) or not items:
                raise DocumentError(f"{key} must be a nonempty array", path=f"payload.{key}")
            return tuple(cls(_generators(g, dim, f"payload.{key}[{k}]")) for k, g in enumerate(items))

        value = ApproximationFamilies(group("upper", MaxOfLinear), group("lower", MinOfLinear))
    return Document(kind, value, raw.get("name"), raw.get("description"), version)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def dump(doc: Document, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(doc))
