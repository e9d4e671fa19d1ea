"""Cube morphisms E_{k,m} -> E and the normalisation of coloured paths.

A path ``lambda`` of the k-graph Lambda_(E,C) is stored densely: every
lattice point of its grid maps to a vertex and every unit step to an
edge.  ``normalize`` reads an edge word and grows the unique compatible
cube it traverses, one edge at a time.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .errors import (
    BadIntervalError,
    CompositionError,
    DomainError,
    EnumerationLimitError,
    NonAssociativeError,
    UnknownIdError,
)
from .graph import (
    ColouredGraph,
    ColouredPath,
    Degree,
    add,
    box,
    grid_edge_id,
    leq,
    point_id,
    step,
    sub,
    unit,
    validate_path,
    zero,
)
from .squares import Square, SquareCollection

CELL_BUDGET = 10**6

GridEdge = tuple[Degree, int]


@lru_cache(maxsize=4096)
def _points(m: Degree) -> tuple[Degree, ...]:
    return tuple(box(m))


@lru_cache(maxsize=4096)
def _grid_edges(m: Degree) -> tuple[GridEdge, ...]:
    k = len(m)
    return tuple(
        (n, c) for n in _points(m) for c in range(1, k + 1) if n[c - 1] < m[c - 1]
    )


def cell_count(m: Degree) -> int:
    return math.prod(a + 1 for a in m)


def _guard(m: Degree) -> None:
    if cell_count(m) > CELL_BUDGET:
        raise EnumerationLimitError(f"cube of degree {m} exceeds the cell budget {CELL_BUDGET}")


class CubeMorphism:
    """A C-compatible coloured-graph morphism from the grid E_{k,m}.

    Equality and hashing are structural on degree, vertices and edges.
    Instances are never mutated after construction.
    """

    __slots__ = ("collection", "degree", "_vertices", "_edges", "_key")

    def __init__(
        self,
        collection: SquareCollection,
        degree: Degree,
        vertices: dict[Degree, str],
        edges: dict[GridEdge, str],
    ):
        self.collection = collection
        self.degree = tuple(degree)
        self._vertices = vertices
        self._edges = edges
        self._key: tuple | None = None

    @property
    def graph(self) -> ColouredGraph:
        return self.collection.graph

    @property
    def vertex_map(self) -> Mapping[Degree, str]:
        return self._vertices

    @property
    def edge_map(self) -> Mapping[GridEdge, str]:
        return self._edges

    def vertex(self, n: Degree) -> str:
        return self._vertices[tuple(n)]

    def edge(self, n: Degree, colour: int) -> str:
        return self._edges[tuple(n), colour]

    def r(self) -> str:
        return self._vertices[zero(len(self.degree))]

    def s(self) -> str:
        return self._vertices[self.degree]

    def d(self) -> Degree:
        return self.degree

    def __len__(self) -> int:
        return sum(self.degree)

    @property
    def key(self) -> tuple:
        if self._key is None:
            m = self.degree
            self._key = (
                m,
                tuple(self._vertices[n] for n in _points(m)),
                tuple(self._edges[e] for e in _grid_edges(m)),
            )
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CubeMorphism):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: CubeMorphism) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        word = ".".join(traversal(self)) or self.r()
        return f"CubeMorphism(d={self.degree}, {word})"

    def encode(self) -> dict:
        return {
            "degree": list(self.degree),
            "vertices": {point_id(n): self._vertices[n] for n in _points(self.degree)},
            "edges": {grid_edge_id(n, c): self._edges[n, c] for n, c in _grid_edges(self.degree)},
        }

    def canonical_id(self) -> str:
        """A compact string determined by the cube; used for skeleton ids."""
        m, verts, edges = self.key
        return "d" + point_id(m) + ":" + "|".join(verts) + ":" + "|".join(edges)


# -- construction ------------------------------------------------------------

def identity_at(C: SquareCollection, v: str) -> CubeMorphism:
    if not C.graph.has_vertex(v):
        raise UnknownIdError(f"unknown vertex {v!r}")
    k = C.graph.k
    return CubeMorphism(C, zero(k), {zero(k): v}, {})


def edge_morphism(C: SquareCollection, f: str) -> CubeMorphism:
    g = C.graph
    edge = g.edge(f)
    k = g.k
    e = unit(k, edge.colour)
    return CubeMorphism(C, e, {zero(k): edge.range, e: edge.source}, {(zero(k), edge.colour): f})


def _extend(
    C: SquareCollection,
    verts: dict[Degree, str],
    edges: dict[GridEdge, str],
    m: Degree,
    f: str,
) -> Degree:
    """Grow the cube of degree ``m`` in place by the edge ``f`` appended at ``m``.

    Returns the new degree ``m + e_i``.  The new slab is filled from the
    corner ``m`` downwards: the i-edge at a face point ``n`` comes from
    flipping the j-then-i path at ``n`` for any off-colour ``j`` with room
    below ``m``.  When several ``j`` apply they must agree.
    """
    g = C.graph
    k = g.k
    i = g.c(f)
    if g.r(f) != verts[m]:
        raise CompositionError(f"edge {f} does not start at the cube source {verts[m]}", 0)
    ei = unit(k, i)
    new_m = add(m, ei)
    _guard(new_m)
    off = [j for j in range(1, k + 1) if j != i and m[j - 1] > 0]

    if not off:
        edges[m, i] = f
        verts[new_m] = g.s(f)
        return new_m

    lower = tuple(m[i - 1] if c == i - 1 else 0 for c in range(k))
    face = sorted(box(m, lower), key=lambda n: -sum(n))
    flip = C.flip_pair
    new_i: dict[Degree, str] = {}
    for n in face:
        up = step(n, i)
        if n == m:
            gi = f
        else:
            gi = None
            first = 0
            for j in off:
                if n[j - 1] >= m[j - 1]:
                    continue
                nj = step(n, j)
                a, b = flip(edges[n, j], new_i[nj])
                if gi is None:
                    gi, first = a, j
                elif a != gi:
                    triple = (edges[n, j], edges[nj, first], new_i[step(nj, first)])
                    raise NonAssociativeError(
                        f"fillings via colours {first} and {j} disagree at {n}", triple
                    )
                edges[up, j] = b
        new_i[n] = gi
        edges[n, i] = gi
        verts[up] = g.s(gi)

    # The squares inside the new slab avoid colour i; check them too.
    if len(off) >= 2:
        for n in face:
            p = step(n, i)
            for x, j in enumerate(off):
                for l in off[x + 1:]:
                    if n[j - 1] >= m[j - 1] or n[l - 1] >= m[l - 1]:
                        continue
                    pj, pl = step(p, j), step(p, l)
                    got = flip(edges[p, j], edges[pj, l])
                    if got != (edges[p, l], edges[pl, j]):
                        nj = step(n, j)
                        triple = (edges[n, j], edges[nj, l], new_i[step(nj, l)])
                        raise NonAssociativeError(
                            f"slab square at {p} in colours {j},{l} is not in the collection",
                            triple,
                        )
    return new_m


def _as_path(C: SquareCollection, x: ColouredPath | Sequence[str], vertex: str | None = None) -> ColouredPath:
    if isinstance(x, ColouredPath):
        return x
    return validate_path(C.graph, x, vertex)


def normalize(C: SquareCollection, x: ColouredPath | Sequence[str], vertex: str | None = None) -> CubeMorphism:
    """The unique compatible cube traversed by the path ``x``.

    Raises MissingSquareError when the collection does not own a needed
    two-edge path and NonAssociativeError when a fill is inconsistent.
    """
    path = _as_path(C, x, vertex)
    k = C.graph.k
    m = zero(k)
    verts = {m: path.range}
    edges: dict[GridEdge, str] = {}
    for f in path.edges:
        m = _extend(C, verts, edges, m, f)
    return CubeMorphism(C, m, verts, edges)


def extend(lam: CubeMorphism, f: str) -> CubeMorphism:
    """normalize(x f) for any traversal x of ``lam``."""
    verts = dict(lam._vertices)
    edges = dict(lam._edges)
    m = _extend(lam.collection, verts, edges, lam.degree, f)
    return CubeMorphism(lam.collection, m, verts, edges)


# -- traversals --------------------------------------------------------------

def traversal(lam: CubeMorphism, colours: Sequence[int] | None = None) -> tuple[str, ...]:
    """Read the edge word of ``lam`` along a staircase.

    ``colours`` defaults to c_1^{m_1} ... c_k^{m_k}.
    """
    m = lam.degree
    k = len(m)
    if colours is None:
        colours = [c for c in range(1, k + 1) for _ in range(m[c - 1])]
    n = zero(k)
    out = []
    for c in colours:
        out.append(lam._edges[n, c])
        n = add(n, unit(k, c))
    if n != m:
        raise DomainError(f"colour word has shape {n}, cube has degree {m}")
    return tuple(out)


def traverses(x: ColouredPath, lam: CubeMorphism) -> bool:
    if not x.edges:
        return lam.degree == zero(lam.graph.k) and x.vertex == lam.r()
    if x.shape() != lam.degree:
        return False
    k = len(lam.degree)
    n = zero(k)
    for e in x.edges:
        c = x.graph.c(e)
        if lam._edges.get((n, c)) != e:
            return False
        n = add(n, unit(k, c))
    return True


def staircases(m: Degree) -> Iterator[tuple[int, ...]]:
    """Colour sequences of shape ``m`` in lexicographic order."""
    counts = list(m)
    total = sum(m)
    word: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(word) == total:
            yield tuple(word)
            return
        for c in range(1, len(counts) + 1):
            if counts[c - 1]:
                counts[c - 1] -= 1
                word.append(c)
                yield from rec()
                word.pop()
                counts[c - 1] += 1

    return rec()


def enumerate_traversals(lam: CubeMorphism) -> list[ColouredPath]:
    g = lam.graph
    if not lam.degree or sum(lam.degree) == 0:
        return [ColouredPath(g, (), lam.r())]
    return [ColouredPath(g, traversal(lam, w)) for w in staircases(lam.degree)]


# -- restriction, composition, factorisation ----------------------------------

def restrict(lam: CubeMorphism, p: Degree, q: Degree) -> CubeMorphism:
    """The translated restriction a -> lam(p + a) on E_{k, q-p}."""
    p, q = tuple(p), tuple(q)
    if len(p) != len(lam.degree) or len(q) != len(lam.degree):
        raise BadIntervalError("interval endpoints have the wrong length")
    if any(a < 0 for a in p) or not (leq(p, q) and leq(q, lam.degree)):
        raise BadIntervalError(f"need 0 <= {p} <= {q} <= {lam.degree}")
    m = sub(q, p)
    verts = {a: lam._vertices[add(p, a)] for a in _points(m)}
    edges = {(a, c): lam._edges[add(p, a), c] for a, c in _grid_edges(m)}
    return CubeMorphism(lam.collection, m, verts, edges)


def segment(lam: CubeMorphism, m: Degree, n: Degree) -> CubeMorphism:
    """lam(m, n): the piece of degree n - m between m and n."""
    return restrict(lam, m, n)


def vertex_at(lam: CubeMorphism, n: Degree) -> str:
    """lam(n), the source of lam(0, n)."""
    if not leq(n, lam.degree):
        raise BadIntervalError(f"{n} is not <= {lam.degree}")
    return lam._vertices[tuple(n)]


def _prepend(
    C: SquareCollection,
    verts: dict[Degree, str],
    edges: dict[GridEdge, str],
    origin: Degree,
    m: Degree,
    f: str,
) -> tuple[Degree, Degree]:
    """Grow a cube at its range end by the edge ``f``, in place.

    The maps are keyed in a fixed frame where the cube occupies
    ``origin .. origin + m``.  The origin moves down by e_i and the new
    face is filled from the new origin upwards by flipping i-then-j
    paths; this mirrors ``_extend``.  Returns the new origin and degree.
    """
    g = C.graph
    k = g.k
    i = g.c(f)
    if g.s(f) != verts[origin]:
        raise CompositionError(f"edge {f} does not end at the cube range {verts[origin]}", 0)
    new_m = step(m, i)
    _guard(new_m)
    o = tuple(x - (1 if c == i - 1 else 0) for c, x in enumerate(origin))
    off = [j for j in range(1, k + 1) if j != i and m[j - 1] > 0]
    upper = tuple(0 if c == i - 1 else m[c] for c in range(k))
    face = sorted(box(upper), key=sum)
    flip = C.flip_pair
    new_i: dict[Degree, str] = {zero(k): f}
    for p in face:
        x = new_i[p]
        ap = add(o, p)
        edges[ap, i] = x
        verts[ap] = g.r(x)
        api = step(ap, i)
        for j in off:
            if p[j - 1] >= m[j - 1]:
                continue
            y = edges[api, j]
            b2, a2 = flip(x, y)
            edges[ap, j] = b2
            seen = new_i.setdefault(step(p, j), a2)
            if seen != a2:
                raise NonAssociativeError(f"left fillings disagree at {step(p, j)}", (x, y, a2))
    if len(off) >= 2:
        for p in face:
            ap = add(o, p)
            for x_, j in enumerate(off):
                for l in off[x_ + 1:]:
                    if p[j - 1] >= m[j - 1] or p[l - 1] >= m[l - 1]:
                        continue
                    got = flip(edges[ap, j], edges[step(ap, j), l])
                    if got != (edges[ap, l], edges[step(ap, l), j]):
                        api = step(ap, i)
                        raise NonAssociativeError(
                            f"face square at {p} in colours {j},{l} is not in the collection",
                            (new_i[p], edges[api, j], edges[step(api, j), l]),
                        )
    return o, new_m


def _grow_left(lam: CubeMorphism, word: Sequence[str]) -> tuple[dict, dict, Degree, Degree]:
    """Prepend ``word`` (last edge first) to a copy of ``lam``; maps stay in lam's frame."""
    verts, edges = dict(lam._vertices), dict(lam._edges)
    origin, m = zero(len(lam.degree)), lam.degree
    for f in reversed(word):
        origin, m = _prepend(lam.collection, verts, edges, origin, m, f)
    return verts, edges, origin, m


def compose_right(mu: CubeMorphism, nu: CubeMorphism) -> CubeMorphism:
    """mu nu, grown from mu by appending a traversal of nu."""
    verts = dict(mu._vertices)
    edges = dict(mu._edges)
    m = mu.degree
    for f in traversal(nu):
        m = _extend(mu.collection, verts, edges, m, f)
    return CubeMorphism(mu.collection, m, verts, edges)


def compose_left(mu: CubeMorphism, nu: CubeMorphism) -> CubeMorphism:
    """mu nu, grown from nu by prepending a traversal of mu, last edge first."""
    verts, edges, origin, m = _grow_left(nu, traversal(mu))
    if any(origin):
        verts = {sub(n, origin): v for n, v in verts.items()}
        edges = {(sub(n, origin), c): e for (n, c), e in edges.items()}
    return CubeMorphism(nu.collection, m, verts, edges)


def prefix_word(alpha: CubeMorphism, lam: CubeMorphism, length: Degree) -> tuple[str, ...]:
    """The default traversal of (alpha lam)(0, length), without building the whole composite.

    Two cubes of equal degree coincide exactly when these words do.
    """
    if alpha.s() != lam.r():
        raise DomainError(f"s(alpha)={alpha.s()} differs from r(lam)={lam.r()}")
    _, edges, origin, m = _grow_left(lam, traversal(alpha))
    if not leq(length, m):
        raise BadIntervalError(f"{length} is not <= {m}")
    n = origin
    out = []
    for c, count in enumerate(length, start=1):
        for _ in range(count):
            out.append(edges[n, c])
            n = step(n, c)
    return tuple(out)


def compose(mu: CubeMorphism, nu: CubeMorphism) -> CubeMorphism:
    """The composite of degree d(mu) + d(nu); normalises x_mu x_nu.

    Either factor is already the cube of its traversals, so the work
    starts from the longer one and adds the other edge by edge.
    """
    if mu.s() != nu.r():
        raise DomainError(f"s(mu)={mu.s()} differs from r(nu)={nu.r()}")
    if mu.collection is not nu.collection and mu.collection != nu.collection:
        raise DomainError("cubes come from different square collections")
    if len(mu) < len(nu):
        return compose_left(mu, nu)
    return compose_right(mu, nu)


def factorise(lam: CubeMorphism, m: Degree) -> tuple[CubeMorphism, CubeMorphism]:
    if not leq(m, lam.degree) or any(a < 0 for a in m):
        raise BadIntervalError(f"{m} is not <= {lam.degree}")
    return restrict(lam, zero(len(m)), m), restrict(lam, m, lam.degree)


# -- checks ------------------------------------------------------------------

def occurring_squares(lam: CubeMorphism) -> Iterator[tuple[Degree, Square]]:
    """Every unit square of the cube, as ``(base point, Square)``."""
    m = lam.degree
    k = len(m)
    for n in _points(m):
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                if n[i - 1] < m[i - 1] and n[j - 1] < m[j - 1]:
                    ni, nj = add(n, unit(k, i)), add(n, unit(k, j))
                    yield n, Square(
                        i, j, lam._edges[n, i], lam._edges[ni, j], lam._edges[n, j], lam._edges[nj, i]
                    )


def incompatible_squares(lam: CubeMorphism) -> list[tuple[Degree, Square]]:
    squares = lam.collection.squares
    return [(n, sq) for n, sq in occurring_squares(lam) if sq not in squares]


def morphism_violations(lam: CubeMorphism) -> list[str]:
    """Coloured-graph morphism laws that fail (empty when lam is a morphism)."""
    g = lam.graph
    k = len(lam.degree)
    problems = []
    for n, c in _grid_edges(lam.degree):
        e = lam._edges.get((n, c))
        if e is None or e not in g.edges:
            problems.append(f"missing edge at {grid_edge_id(n, c)}")
            continue
        if g.c(e) != c:
            problems.append(f"{e} at {grid_edge_id(n, c)} has colour {g.c(e)}")
        if g.r(e) != lam._vertices.get(n):
            problems.append(f"r({e}) != lambda{n}")
        if g.s(e) != lam._vertices.get(add(n, unit(k, c))):
            problems.append(f"s({e}) != lambda{add(n, unit(k, c))}")
    return problems


def tricolour_fill(C: SquareCollection, f: str, g: str, h: str) -> CubeMorphism:
    """Assemble the cube of fgh from the six rearranged traversals.

    Built directly from the flips rather than through ``normalize``;
    disagreeing traversals raise NonAssociativeError.
    """
    G = C.graph
    validate_path(G, (f, g, h))
    cf, cg, ch = G.c(f), G.c(g), G.c(h)
    if len({cf, cg, ch}) != 3:
        raise DomainError("tricolour_fill needs three distinct colours")
    g1, f1 = C.flip_pair(f, g)
    h1, f2u = C.flip_pair(f1, h)
    h2u, g2u = C.flip_pair(g1, h1)
    h_1, g_1 = C.flip_pair(g, h)
    h_2, f_1 = C.flip_pair(f, h_1)
    g_2, f_2 = C.flip_pair(f_1, g_1)
    words = [
        (f, g, h),
        (f, h_1, g_1),
        (h_2, f_1, g_1),
        (h_2, g_2, f_2),
        (g1, f1, h),
        (g1, h1, f2u),
    ]
    k = G.k
    m = add(add(unit(k, cf), unit(k, cg)), unit(k, ch))
    verts: dict[Degree, str] = {zero(k): G.r(f)}
    edges: dict[GridEdge, str] = {}
    for word in words:
        n = zero(k)
        for e in word:
            c = G.c(e)
            if edges.setdefault((n, c), e) != e:
                raise NonAssociativeError(
                    f"traversals disagree at {grid_edge_id(n, c)}", (f, g, h)
                )
            n = add(n, unit(k, c))
            verts[n] = G.s(e)
    lam = CubeMorphism(C, m, verts, edges)
    if incompatible_squares(lam):
        raise NonAssociativeError("filled cube has a square outside the collection", (f, g, h))
    return lam
