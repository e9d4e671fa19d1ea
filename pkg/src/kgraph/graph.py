"""k-coloured directed graphs, degrees in N^k, colour words and model grids.

Conventions follow the usual k-graph literature: a path ``x1 x2 ... xn``
is read range first, so ``s(x_i) == r(x_{i+1})``.  Colours are 1-based
integers ``1..k``; degrees are plain tuples of non-negative ints.
"""

from __future__ import annotations

import itertools
import operator
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    BadIntervalError,
    CompositionError,
    MalformedWordError,
    UnknownIdError,
)

Degree = tuple[int, ...]
ColourWord = tuple[int, ...]


# -- degree arithmetic -------------------------------------------------------

def zero(k: int) -> Degree:
    return (0,) * k


def unit(k: int, colour: int) -> Degree:
    """The generator e_colour of N^k (colour is 1-based)."""
    return tuple(1 if i == colour - 1 else 0 for i in range(k))


def add(m: Degree, n: Degree) -> Degree:
    return tuple(map(operator.add, m, n))


def sub(m: Degree, n: Degree) -> Degree:
    return tuple(map(operator.sub, m, n))


def step(n: Degree, colour: int) -> Degree:
    """n + e_colour, without building the unit vector."""
    return n[: colour - 1] + (n[colour - 1] + 1,) + n[colour:]


def leq(m: Degree, n: Degree) -> bool:
    return all(a <= b for a, b in zip(m, n))


def join(m: Degree, n: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def norm(m: Degree) -> int:
    return sum(m)


def box(m: Degree, lower: Degree | None = None) -> Iterator[Degree]:
    """Lattice points n with lower <= n <= m, in lexicographic order."""
    lower = lower or zero(len(m))
    return itertools.product(*(range(a, b + 1) for a, b in zip(lower, m)))


def degrees_upto(bound: Degree) -> list[Degree]:
    """All degrees below ``bound`` sorted by total length, then lexicographically."""
    return sorted(box(bound), key=lambda d: (sum(d), d))


def parse_degree(text: str) -> Degree:
    try:
        values = tuple(int(part) for part in text.replace(" ", "").strip("()").split(",") if part != "")
    except ValueError as exc:
        raise BadIntervalError(f"not a degree: {text!r}") from exc
    if any(v < 0 for v in values):
        raise BadIntervalError(f"degree has a negative entry: {text!r}")
    return values


def abelianize(word: Sequence[int], k: int) -> Degree:
    """Count the letters of a colour word: the quotient map F_k^+ -> N^k."""
    counts = [0] * k
    for position, letter in enumerate(word):
        if not isinstance(letter, int) or not 1 <= letter <= k:
            raise MalformedWordError(
                f"letter {letter!r} at position {position} is not a colour in 1..{k}"
            )
        counts[letter - 1] += 1
    return tuple(counts)


# -- coloured graphs ---------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    id: str
    range: str
    source: str
    colour: int


@dataclass(frozen=True)
class ColouredGraph:
    """A finite k-coloured directed graph.

    Construction checks that ids are unique, colours lie in ``1..k`` and
    every edge's range and source is a vertex.
    """

    k: int
    vertices: tuple[str, ...]
    edges: Mapping[str, Edge] = field(repr=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be positive")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex id")
        vertex_set = set(self.vertices)
        for eid, edge in self.edges.items():
            if eid != edge.id:
                raise ValueError(f"edge key {eid!r} does not match its id {edge.id!r}")
            if not 1 <= edge.colour <= self.k:
                raise ValueError(f"edge {eid!r} has colour {edge.colour} outside 1..{self.k}")
            if edge.range not in vertex_set or edge.source not in vertex_set:
                raise ValueError(f"edge {eid!r} has an endpoint that is not a vertex")

    @classmethod
    def build(cls, k: int, vertices: Iterable[str], edges: Iterable[tuple[str, str, str, int]]) -> ColouredGraph:
        """Build from ``(id, range, source, colour)`` tuples."""
        table: dict[str, Edge] = {}
        for eid, r, s, c in edges:
            if eid in table:
                raise ValueError(f"duplicate edge id {eid!r}")
            table[eid] = Edge(eid, r, s, c)
        return cls(k, tuple(vertices), table)

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise UnknownIdError(f"unknown edge {eid!r}") from None

    def r(self, eid: str) -> str:
        return self.edge(eid).range

    def s(self, eid: str) -> str:
        return self.edge(eid).source

    def c(self, eid: str) -> int:
        return self.edge(eid).colour

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_set

    @cached_property
    def _vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def in_edges(self) -> Mapping[tuple[str, int], tuple[str, ...]]:
        """Edges grouped by ``(range, colour)``; these are the ways to extend a path at that vertex."""
        table: dict[tuple[str, int], list[str]] = defaultdict(list)
        for eid in sorted(self.edges):
            edge = self.edges[eid]
            table[edge.range, edge.colour].append(eid)
        return {key: tuple(ids) for key, ids in table.items()}

    def edges_at(self, v: str, colour: int | None = None) -> tuple[str, ...]:
        """Edges with range ``v`` (optionally of one colour), sorted by id."""
        if colour is not None:
            return self.in_edges.get((v, colour), ())
        return tuple(e for c in range(1, self.k + 1) for e in self.in_edges.get((v, c), ()))

    def paths(self, length: int, start: str | None = None) -> Iterator[tuple[str, ...]]:
        """All composable edge sequences of the given length (DFS, sorted ids)."""
        starts = [start] if start is not None else list(self.vertices)

        def walk(v: str, remaining: int) -> Iterator[tuple[str, ...]]:
            if remaining == 0:
                yield ()
                return
            for e in self.edges_at(v):
                for rest in walk(self.edges[e].source, remaining - 1):
                    yield (e, *rest)

        for v in starts:
            yield from walk(v, length)


@dataclass(frozen=True)
class ColouredPath:
    """A finite path; the empty path carries its vertex explicitly."""

    graph: ColouredGraph = field(repr=False, compare=False)
    edges: tuple[str, ...]
    vertex: str | None = None

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def range(self) -> str:
        return self.graph.r(self.edges[0]) if self.edges else self.vertex  # type: ignore[return-value]

    @property
    def source(self) -> str:
        return self.graph.s(self.edges[-1]) if self.edges else self.vertex  # type: ignore[return-value]

    def colours(self) -> ColourWord:
        return tuple(self.graph.c(e) for e in self.edges)

    def shape(self) -> Degree:
        return abelianize(self.colours(), self.graph.k)


def validate_path(graph: ColouredGraph, edges: Sequence[str], vertex: str | None = None) -> ColouredPath:
    """Check composability and wrap the edges as a path.

    For the empty sequence ``vertex`` names the degree-zero path.
    """
    edges = tuple(edges)
    for e in edges:
        graph.edge(e)
    if not edges:
        if vertex is None or not graph.has_vertex(vertex):
            raise UnknownIdError(f"empty path needs a known vertex, got {vertex!r}")
        return ColouredPath(graph, (), vertex)
    for index in range(1, len(edges)):
        if graph.s(edges[index - 1]) != graph.r(edges[index]):
            raise CompositionError(
                f"s({edges[index - 1]}) != r({edges[index]}) at index {index}", index
            )
    if vertex is not None and vertex != graph.r(edges[0]):
        raise CompositionError(f"path does not start at {vertex!r}", 0)
    return ColouredPath(graph, edges, None)


# -- model grids -------------------------------------------------------------

def point_id(n: Degree) -> str:
    return "(" + ",".join(map(str, n)) + ")"


def grid_edge_id(n: Degree, colour: int) -> str:
    return f"{point_id(n)}+v_{colour}"


@dataclass(frozen=True)
class GridGraph:
    """The model graph E_{k,[lower,upper]}: lattice points and unit steps.

    The edge ``n+v_i`` has range ``n``, source ``n+e_i`` and colour ``i``.
    """

    k: int
    lower: Degree
    upper: Degree

    def points(self) -> list[Degree]:
        return list(box(self.upper, self.lower))

    def grid_edges(self) -> list[tuple[Degree, int]]:
        out = []
        for n in self.points():
            for colour in range(1, self.k + 1):
                if n[colour - 1] < self.upper[colour - 1]:
                    out.append((n, colour))
        return out

    def to_coloured_graph(self) -> ColouredGraph:
        return ColouredGraph.build(
            self.k,
            [point_id(n) for n in self.points()],
            [
                (grid_edge_id(n, c), point_id(n), point_id(add(n, unit(self.k, c))), c)
                for n, c in self.grid_edges()
            ],
        )


def build_grid(k: int, lower: Degree, upper: Degree) -> GridGraph:
    if len(lower) != k or len(upper) != k:
        raise BadIntervalError(f"bounds must have length {k}")
    if any(v < 0 for v in lower) or not leq(lower, upper):
        raise BadIntervalError(f"{lower} is not <= {upper}")
    return GridGraph(k, tuple(lower), tuple(upper))


# -- isomorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class ColouredIsomorphism:
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]


def find_coloured_isomorphisms(
    g1: ColouredGraph, g2: ColouredGraph, limit: int = 1
) -> list[ColouredIsomorphism]:
    """Backtracking search for colour, range and source preserving bijections."""
    if g1.k != g2.k or len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return []

    def signature(g: ColouredGraph, v: str) -> tuple:
        ins = [0] * g.k
        outs = [0] * g.k
        loops = [0] * g.k
        for e in g.edges.values():
            if e.range == v:
                ins[e.colour - 1] += 1
            if e.source == v:
                outs[e.colour - 1] += 1
            if e.range == v and e.source == v:
                loops[e.colour - 1] += 1
        return tuple(ins), tuple(outs), tuple(loops)

    sig1 = {v: signature(g1, v) for v in g1.vertices}
    sig2 = {v: signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return []

    # Edges adjacent to already-placed vertices first keeps the search tight.
    order: list[str] = []
    placed: set[str] = set()
    remaining = sorted(g1.edges)
    while remaining:
        remaining.sort(key=lambda e: (-((g1.r(e) in placed) + (g1.s(e) in placed)), e))
        e = remaining.pop(0)
        order.append(e)
        placed.update((g1.r(e), g1.s(e)))
    isolated = [v for v in g1.vertices if v not in placed]

    by_colour2: dict[int, list[str]] = defaultdict(list)
    for e in sorted(g2.edges):
        by_colour2[g2.c(e)].append(e)

    results: list[ColouredIsomorphism] = []
    vmap: dict[str, str] = {}
    vused: set[str] = set()
    emap: dict[str, str] = {}
    eused: set[str] = set()

    def bind(v1: str, v2: str, added: list[str]) -> bool:
        if v1 in vmap:
            return vmap[v1] == v2
        if v2 in vused or sig1[v1] != sig2[v2]:
            return False
        vmap[v1] = v2
        vused.add(v2)
        added.append(v1)
        return True

    def place_isolated(i: int) -> Iterator[None]:
        if i == len(isolated):
            yield
            return
        v1 = isolated[i]
        for v2 in g2.vertices:
            if v2 in vused or sig1[v1] != sig2[v2]:
                continue
            vmap[v1] = v2
            vused.add(v2)
            yield from place_isolated(i + 1)
            del vmap[v1]
            vused.discard(v2)

    def search(i: int) -> bool:
        if i == len(order):
            for _ in place_isolated(0):
                results.append(ColouredIsomorphism(dict(vmap), dict(emap)))
                if len(results) >= limit:
                    return True
            return False
        e1 = order[i]
        edge1 = g1.edges[e1]
        for e2 in by_colour2[edge1.colour]:
            if e2 in eused:
                continue
            edge2 = g2.edges[e2]
            added: list[str] = []
            if bind(edge1.range, edge2.range, added) and bind(edge1.source, edge2.source, added):
                emap[e1] = e2
                eused.add(e2)
                if search(i + 1):
                    return True
                del emap[e1]
                eused.discard(e2)
            for v in added:
                vused.discard(vmap.pop(v))
        return False

    search(0)
    return results


def relabel(graph: ColouredGraph, vertex_map: Mapping[str, str], edge_map: Mapping[str, str]) -> ColouredGraph:
    """Rename vertices and edges of ``graph`` (both maps must be injective)."""
    return ColouredGraph.build(
        graph.k,
        [vertex_map[v] for v in graph.vertices],
        [
            (edge_map[e.id], vertex_map[e.range], vertex_map[e.source], e.colour)
            for e in graph.edges.values()
        ],
    )
