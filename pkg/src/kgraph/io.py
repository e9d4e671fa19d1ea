"""JSON (de)serialisation of instances: a coloured graph, its squares and optional metadata."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import MalformedCollectionError, SchemaError
from .graph import ColouredGraph
from .squares import Square, SquareCollection

METADATA_KEYS = ("name", "provenance", "seed")


@dataclass(frozen=True)
class Instance:
    graph: ColouredGraph
    squares: SquareCollection
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def of(cls, pair: tuple[ColouredGraph, SquareCollection], **metadata: Any) -> Instance:
        graph, squares = pair
        return cls(graph, squares, {k: v for k, v in metadata.items() if v is not None})

    def structurally_equal(self, other: Instance) -> bool:
        return to_dict(self, metadata=False) == to_dict(other, metadata=False)


def graph_to_dict(graph: ColouredGraph) -> dict:
    return {
        "k": graph.k,
        "vertices": list(graph.vertices),
        "edges": [
            {"id": e.id, "range": e.range, "source": e.source, "colour": e.colour}
            for e in sorted(graph.edges.values(), key=lambda e: e.id)
        ],
    }


def squares_to_list(C: SquareCollection) -> list[dict]:
    return [
        {"i": sq.i, "j": sq.j, "ci_first": [sq.a, sq.b], "cj_first": [sq.b2, sq.a2]}
        for sq in sorted(C.squares)
    ]


def to_dict(instance: Instance, metadata: bool = True) -> dict:
    out = graph_to_dict(instance.graph)
    out["squares"] = squares_to_list(instance.squares)
    if metadata and instance.metadata:
        out["metadata"] = {k: instance.metadata[k] for k in METADATA_KEYS if k in instance.metadata}
    return out


def _expect(value: Any, kind: type | tuple[type, ...], where: str) -> Any:
    # bool is an int subclass; reject it where an int is expected.
    if isinstance(value, bool) and kind in (int, (int,)):
        raise SchemaError("expected an integer, got a boolean", where)
    if not isinstance(value, kind):
        name = kind.__name__ if isinstance(kind, type) else "/".join(t.__name__ for t in kind)
        raise SchemaError(f"expected {name}, got {type(value).__name__}", where)
    return value


def _field(obj: dict, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if key not in obj:
        raise SchemaError("missing field", f"{where}.{key}" if where else key)
    return _expect(obj[key], kind, f"{where}.{key}" if where else key)


def from_dict(data: Any) -> Instance:
    """Parse and re-validate an instance; errors name the offending field."""
    _expect(data, dict, "$")
    k = _field(data, "k", int, "")
    if k < 1:
        raise SchemaError("k must be positive", "k")
    vertices = _field(data, "vertices", list, "")
    seen_vertices: set[str] = set()
    for x, v in enumerate(vertices):
        _expect(v, str, f"vertices[{x}]")
        if v in seen_vertices:
            raise SchemaError(f"duplicate vertex id {v!r}", f"vertices[{x}]")
        seen_vertices.add(v)

    edges = []
    seen_edges: set[str] = set()
    for x, e in enumerate(_field(data, "edges", list, "")):
        where = f"edges[{x}]"
        _expect(e, dict, where)
        eid = _field(e, "id", str, where)
        where = f"edges[{x}]({eid})"
        if eid in seen_edges:
            raise SchemaError(f"duplicate edge id {eid!r}", where)
        seen_edges.add(eid)
        r = _field(e, "range", str, where)
        s = _field(e, "source", str, where)
        c = _field(e, "colour", int, where)
        if not 1 <= c <= k:
            raise SchemaError(f"colour {c} outside 1..{k}", f"{where}.colour")
        for name, v in (("range", r), ("source", s)):
            if v not in seen_vertices:
                raise SchemaError(f"unknown vertex {v!r}", f"{where}.{name}")
        edges.append((eid, r, s, c))
    graph = ColouredGraph.build(k, vertices, edges)

    squares = set()
    for x, sq in enumerate(data.get("squares", [])):
        where = f"squares[{x}]"
        _expect(sq, dict, where)
        i = _field(sq, "i", int, where)
        j = _field(sq, "j", int, where)
        first = _field(sq, "ci_first", list, where)
        second = _field(sq, "cj_first", list, where)
        for name, pair in (("ci_first", first), ("cj_first", second)):
            if len(pair) != 2 or not all(isinstance(p, str) for p in pair):
                raise SchemaError("expected two edge ids", f"{where}.{name}")
            for p in pair:
                if p not in seen_edges:
                    raise SchemaError(f"unknown edge {p!r}", f"{where}.{name}")
        if not 1 <= i < j <= k:
            raise SchemaError(f"need 1 <= i < j <= {k}, got i={i}, j={j}", where)
        square = Square(i, j, first[0], first[1], second[0], second[1])
        if square in squares:
            raise SchemaError("duplicate square", where)
        squares.add(square)
    try:
        C = SquareCollection(graph, frozenset(squares))
    except MalformedCollectionError as exc:
        raise SchemaError(str(exc), "squares") from exc

    metadata = data.get("metadata", {})
    _expect(metadata, dict, "metadata")
    return Instance(graph, C, {k_: metadata[k_] for k_ in METADATA_KEYS if k_ in metadata})


def dumps(instance: Instance) -> str:
    return json.dumps(to_dict(instance), indent=2, sort_keys=False)


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} at line {exc.lineno}", "$") from exc
    return from_dict(data)


def load(path: str | Path) -> Instance:
    return loads(Path(path).read_text())


def save(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(instance) + "\n")
