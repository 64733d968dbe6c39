"""JSON document formats read and written by the command line.

Structure::

    {"kind": "tree", "n": 4, "edges": [[0, 3], [1, 3], [2, 3]], "labels": ["a", "b", "c", "m"]}
    {"kind": "chain", "n": 5}
    {"kind": "star", "n": 8}
    {"kind": "grid", "width": 2, "height": 3}
    {"kind": "table", "n": 2, "table": [0, 0, 0, 1, 0, 1, 1, 1]}

``table`` is the flattened row-major median table ``m(x, y, z)`` at index
``(x * n + y) * n + z``. ``labels`` is optional for every kind.

Function: ``{"values": [...], "range": [c, d]}`` (``range`` optional).
Function list: ``{"functions": [[...], ...], "range": [c, d]}``.
Point map: ``{"map": [...]}``. Topology: ``{"n": 3, "opens": [[], [0], [0, 1, 2]]}``.

Points may be written as integer ids, labels, or grid coordinates ``"r,c"``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from .errors import InvalidInput
from .structures import KINDS, Structure
from .topology import FiniteTopology
from .variation import RealFunction


def load_document(path: str | Path) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    return doc


def _int(doc: dict, key: str) -> int:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInput(f"field {key!r} must be an integer")
    return v


def _reals(values, what: str) -> tuple[float, ...]:
    if not isinstance(values, list):
        raise InvalidInput(f"{what} must be a list of numbers")
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise InvalidInput(f"{what} contains a non-number: {v!r}")
        try:
            out.append(float(v))
        except ValueError as exc:
            raise InvalidInput(f"{what} contains a non-number: {v!r}") from exc
    return tuple(out)


def _range(doc: dict):
    if "range" not in doc or doc["range"] is None:
        return None
    r = _reals(doc["range"], "range")
    if len(r) != 2:
        raise InvalidInput("range must be a pair [c, d]")
    return r


def structure_from_dict(doc: dict[str, Any]) -> Structure:
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InvalidInput(f"kind must be one of {list(KINDS)}, got {kind!r}")
    labels = doc.get("labels")
    if kind == "grid":
        s = Structure.grid(_int(doc, "width"), _int(doc, "height"), labels=labels)
        if "n" in doc and _int(doc, "n") != s.n:
            raise InvalidInput(f"n = {doc['n']} does not match a {s.width} x {s.height} grid")
        return s
    n = _int(doc, "n")
    if kind == "chain":
        return Structure.chain(n, labels=labels)
    if kind == "star":
        return Structure.star(n, labels=labels)
    if kind == "tree":
        edges = doc.get("edges")
        if not isinstance(edges, list) or any(not isinstance(e, list) or len(e) != 2 for e in edges):
            raise InvalidInput("edges must be a list of [a, b] pairs")
        return Structure.tree(n, [tuple(e) for e in edges], labels=labels)
    table = doc.get("table")
    if not isinstance(table, list):
        raise InvalidInput("table must be a flat list of n^3 integers")
    return Structure.from_table(n, table, labels=labels)


def structure_to_dict(s: Structure) -> dict[str, Any]:
    doc: dict[str, Any] = {"kind": s.kind}
    if s.kind == "grid":
        doc.update(width=s.width, height=s.height)
    else:
        doc["n"] = s.n
    if s.kind == "tree":
        doc["edges"] = [list(e) for e in s.tree_edges]
    if s.kind == "table":
        doc["table"] = [int(v) for v in s.median_array.ravel()]
    if s.labels:
        doc["labels"] = list(s.labels)
    return doc


def function_from_dict(doc: dict[str, Any]) -> RealFunction:
    if "values" not in doc:
        raise InvalidInput("function document needs a 'values' list")
    return RealFunction(_reals(doc["values"], "values"), _range(doc))


def functions_from_dict(doc: dict[str, Any]) -> tuple[list[tuple[float, ...]], tuple[float, float] | None]:
    fs = doc.get("functions")
    if not isinstance(fs, list) or not fs:
        raise InvalidInput("function list document needs a nonempty 'functions' list")
    return [_reals(f, f"functions[{i}]") for i, f in enumerate(fs)], _range(doc)


def topology_from_dict(doc: dict[str, Any]) -> FiniteTopology:
    n = _int(doc, "n")
    opens = doc.get("opens")
    if not isinstance(opens, list):
        raise InvalidInput("topology document needs an 'opens' list")
    for o in opens:
        if not isinstance(o, list) or any(isinstance(p, bool) or not isinstance(p, int) or not 0 <= p < n for p in o):
            raise InvalidInput(f"open set {o!r} is not a list of points in 0..{n - 1}")
    return FiniteTopology.from_opens(n, opens)


def is_topology_document(doc: dict[str, Any]) -> bool:
    return "opens" in doc


def map_from_dict(doc: dict[str, Any], dst: Structure) -> list[int]:
    h = doc.get("map")
    if not isinstance(h, list):
        raise InvalidInput("map document needs a 'map' list")
    return [parse_point(dst, p) for p in h]


def parse_point(s: Structure, token) -> int:
    """An id, a label, or ``"r,c"`` on a grid."""
    if isinstance(token, bool):
        raise InvalidInput(f"not a point: {token!r}")
    if isinstance(token, int):
        return s.check_point(token)
    text = str(token).strip()
    if s.labels and text in s.labels:
        return s.labels.index(text)
    if "," in text:
        if s.kind != "grid":
            raise InvalidInput(f"coordinates {text!r} need a grid structure")
        try:
            r, c = (int(x) for x in text.split(","))
        except ValueError as exc:
            raise InvalidInput(f"bad grid coordinates {text!r}") from exc
        return s.point_at(r, c)
    try:
        return s.check_point(int(text))
    except ValueError as exc:
        raise InvalidInput(f"unknown point {text!r}") from exc


def parse_points(s: Structure, tokens: Iterable[str]) -> list[int]:
    """Points from command-line tokens; a token may also be a comma list like ``a,b,c``.

    On grids a comma joins coordinates, so grid lists need one ``r,c`` per token.
    """
    out = []
    for tok in tokens:
        if s.kind != "grid" and "," in tok:
            out.extend(parse_point(s, part) for part in tok.split(",") if part)
        else:
            out.append(parse_point(s, tok))
    return out
