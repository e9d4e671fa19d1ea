"""Canonical and random (E, C) instances."""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import DomainError, EnumerationLimitError, KGraphError
from .graph import ColouredGraph, Degree, add, box, build_grid, grid_edge_id, unit
from .squares import SquareCollection, Square, check_associative, check_complete, make_square

Instance = tuple[ColouredGraph, SquareCollection]


def omega(k: int, m: Degree) -> Instance:
    """The grid E_{k,m} with its only complete collection of squares."""
    grid = build_grid(k, (0,) * k, tuple(m))
    g = grid.to_coloured_graph()
    squares = set()
    for n in grid.points():
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                ni, nj = add(n, unit(k, i)), add(n, unit(k, j))
                if n[i - 1] < m[i - 1] and n[j - 1] < m[j - 1]:
                    squares.add(Square(
                        i, j,
                        grid_edge_id(n, i), grid_edge_id(ni, j),
                        grid_edge_id(n, j), grid_edge_id(nj, i),
                    ))
    return g, SquareCollection(g, frozenset(squares))


# -- 1-graphs and products ---------------------------------------------------

def one_graph(vertices: Sequence[str], edges: Sequence[tuple[str, str, str]]) -> ColouredGraph:
    """A 1-graph from ``(id, range, source)`` triples."""
    return ColouredGraph.build(1, vertices, [(e, r, s, 1) for e, r, s in edges])


def bouquet(n: int, prefix: str = "f") -> ColouredGraph:
    return one_graph(["v"], [(f"{prefix}{i}", "v", "v") for i in range(1, n + 1)])


def cycle(n: int) -> ColouredGraph:
    """The 1-graph v0 <- v1 <- ... <- v{n-1} <- v0."""
    return one_graph(
        [f"v{i}" for i in range(n)],
        [(f"e{i}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)],
    )


def _tuple_id(parts: Sequence[str]) -> str:
    return parts[0] if len(parts) == 1 else "(" + ",".join(parts) + ")"


def product_of_1graphs(graphs: Sequence[ColouredGraph]) -> Instance:
    """Cartesian product: colour i moves in factor i, squares commute componentwise."""
    if any(g.k != 1 for g in graphs):
        raise DomainError("every factor must be a 1-graph")
    k = len(graphs)
    vertex_tuples = list(itertools.product(*(g.vertices for g in graphs)))
    edges = []
    edge_at: dict[tuple[tuple[str, ...], int, str], str] = {}
    for u in vertex_tuples:
        for i, g in enumerate(graphs, start=1):
            for e in g.edges_at(u[i - 1]):
                src = list(u)
                src[i - 1] = g.s(e)
                eid = f"{e}@{_tuple_id(u)}" if k > 1 else e
                edges.append((eid, _tuple_id(u), _tuple_id(src), i))
                edge_at[u, i, e] = eid
    graph = ColouredGraph.build(k, [_tuple_id(u) for u in vertex_tuples], edges)

    squares = set()
    for u in vertex_tuples:
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                gi, gj = graphs[i - 1], graphs[j - 1]
                for ei in gi.edges_at(u[i - 1]):
                    for ej in gj.edges_at(u[j - 1]):
                        ui = list(u)
                        ui[i - 1] = gi.s(ei)
                        uj = list(u)
                        uj[j - 1] = gj.s(ej)
                        squares.add(Square(
                            i, j,
                            edge_at[u, i, ei], edge_at[tuple(ui), j, ej],
                            edge_at[u, j, ej], edge_at[tuple(uj), i, ei],
                        ))
    C = SquareCollection(graph, frozenset(squares))
    if k >= 3 and not check_associative(C):
        raise KGraphError("product collection failed the cube condition")
    return graph, C


def torus() -> Instance:
    """One blue loop f, one red loop g, the square fg ~ gf."""
    g = ColouredGraph.build(2, ["v"], [("f", "v", "v", 1), ("g", "v", "v", 2)])
    return g, SquareCollection.from_faces(g, [(("f", "g"), ("g", "f"))])


def free_bouquets(blue: int = 2, red: int = 2, twisted: bool = False) -> Instance:
    """Single vertex with ``blue`` blue and ``red`` red loops.

    The plain version pairs f_a g_b ~ g_b f_a.  The twisted version (needs
    blue == red) pairs f_a g_b ~ g_a f_b.
    """
    fs = [f"f{a}" for a in range(1, blue + 1)]
    gs = [f"g{b}" for b in range(1, red + 1)]
    g = ColouredGraph.build(2, ["v"], [(f, "v", "v", 1) for f in fs] + [(x, "v", "v", 2) for x in gs])
    if twisted:
        if blue != red:
            raise DomainError("the twisted pairing needs as many blue as red loops")
        pairs = [((fs[a], gs[b]), (gs[a], fs[b])) for a in range(blue) for b in range(red)]
    else:
        pairs = [((f, x), (x, f)) for f in fs for x in gs]
    return g, SquareCollection.from_faces(g, pairs)


def bouquet_2graph(blue: int, red: int, pairing: Mapping[tuple[int, int], tuple[int, int]]) -> Instance:
    """Single vertex, loops f1.. (blue) and g1.. (red), with f_a g_b ~ g_c f_d for (c, d) = pairing[a, b].

    ``pairing`` must be a bijection from blue-red index pairs onto red-blue index pairs.
    """
    fs = [f"f{a}" for a in range(1, blue + 1)]
    gs = [f"g{b}" for b in range(1, red + 1)]
    keys = [(a, b) for a in range(1, blue + 1) for b in range(1, red + 1)]
    images = sorted(pairing[key] for key in keys)
    if images != sorted((c, d) for c in range(1, red + 1) for d in range(1, blue + 1)):
        raise DomainError("pairing must be a bijection onto red-blue index pairs")
    g = ColouredGraph.build(2, ["v"], [(f, "v", "v", 1) for f in fs] + [(x, "v", "v", 2) for x in gs])
    pairs = [((f"f{a}", f"g{b}"), (f"g{pairing[a, b][0]}", f"f{pairing[a, b][1]}")) for a, b in keys]
    return g, SquareCollection.from_faces(g, pairs)


def disjoint_union(first: Instance, second: Instance, tags: tuple[str, str] = ("A", "B")) -> Instance:
    g1, C1 = first
    g2, C2 = second
    if g1.k != g2.k:
        raise DomainError("instances must have the same k")
    parts = []
    for (g, C), tag in zip((first, second), tags):
        parts.append((g, C, lambda x, t=tag: f"{t}.{x}"))
    vertices = [name(v) for g, _, name in parts for v in g.vertices]
    edges = [
        (name(e.id), name(e.range), name(e.source), e.colour)
        for g, _, name in parts
        for e in g.edges.values()
    ]
    graph = ColouredGraph.build(g1.k, vertices, edges)
    squares = frozenset(
        Square(sq.i, sq.j, name(sq.a), name(sq.b), name(sq.b2), name(sq.a2))
        for _, C, name in parts
        for sq in C.squares
    )
    return graph, SquareCollection(graph, squares)


def nonrowfinite_example(n: int = 3) -> Instance:
    """The 2-coloured graph on v, w, p, q with the blue families alpha_i, beta_i cut at n.

    Red f: w -> v and g: q -> p; blue alpha_i: p -> v and beta_i: q -> w;
    squares alpha_i g ~ f beta_i.
    """
    edges = [("f", "v", "w", 2), ("g", "p", "q", 2)]
    edges += [(f"alpha{i}", "v", "p", 1) for i in range(1, n + 1)]
    edges += [(f"beta{i}", "w", "q", 1) for i in range(1, n + 1)]
    g = ColouredGraph.build(2, ["v", "w", "p", "q"], edges)
    C = SquareCollection.from_faces(g, [((f"alpha{i}", "g"), ("f", f"beta{i}")) for i in range(1, n + 1)])
    return g, C


# -- brute-force collections -------------------------------------------------

def _two_path_classes(graph: ColouredGraph) -> dict[tuple[int, int, str, str], tuple[list, list]]:
    """Mixed 2-paths grouped by colour pair i<j and endpoints, split by colour order."""
    classes: dict[tuple[int, int, str, str], tuple[list, list]] = defaultdict(lambda: ([], []))
    for e1 in sorted(graph.edges):
        for e2 in graph.edges_at(graph.s(e1)):
            c1, c2 = graph.c(e1), graph.c(e2)
            if c1 == c2:
                continue
            key = (min(c1, c2), max(c1, c2), graph.r(e1), graph.s(e2))
            classes[key][0 if c1 < c2 else 1].append((e1, e2))
    return dict(classes)


def all_complete_collections(graph: ColouredGraph) -> Iterator[SquareCollection]:
    """Every complete collection of squares on ``graph``, by brute force.

    Completeness forces a bijection between i-then-j and j-then-i paths
    with the same endpoints; this enumerates all of them.
    """
    classes = _two_path_classes(graph)
    if any(len(a) != len(b) for a, b in classes.values()):
        return
    keys = sorted(classes)
    choices = [list(itertools.permutations(classes[key][1])) for key in keys]
    for combo in itertools.product(*choices):
        pairs = []
        for key, perm in zip(keys, combo):
            pairs.extend(zip(classes[key][0], perm))
        yield SquareCollection(graph, frozenset(make_square(graph, x, y) for x, y in pairs))


def first_non_associative(graph: ColouredGraph, limit: int = 100_000) -> SquareCollection | None:
    for count, C in enumerate(all_complete_collections(graph)):
        if count >= limit:
            break
        if not check_associative(C):
            return C
    return None


# -- random instances --------------------------------------------------------

def _random_one_graph(rng: random.Random, n_vertices: int, max_in: int, name: str) -> ColouredGraph:
    vertices = [f"{name}{i}" for i in range(n_vertices)]
    edges = []
    for v in vertices:
        for x in range(rng.randint(1, max_in)):
            edges.append((f"{name}e{len(edges)}", v, rng.choice(vertices)))
    return one_graph(vertices, edges)


def random_instance(
    k: int,
    n_vertices: int = 2,
    max_in: int = 2,
    seed: int = 0,
    attempts: int = 20_000,
) -> Instance:
    """A seeded random instance with no sources.

    k = 2 draws in-edges per vertex and colour, redraws until blue-red and
    red-blue 2-paths balance for every pair of endpoints, then pairs them by
    a uniformly random bijection.  k = 3 takes a product of random 1-graphs.
    """
    rng = random.Random(seed)
    if k == 3:
        factors = [
            _random_one_graph(rng, rng.randint(1, n_vertices), max_in, name)
            for name in ("a", "b", "c")
        ]
        return product_of_1graphs(factors)
    if k != 2:
        raise DomainError("random_instance supports k in {2, 3}")

    vertices = [f"v{i}" for i in range(n_vertices)]
    for _ in range(attempts):
        edges = []
        for v in vertices:
            for colour, letter in ((1, "b"), (2, "r")):
                for x in range(rng.randint(1, max_in)):
                    edges.append((f"{letter}{len(edges)}", v, rng.choice(vertices), colour))
        graph = ColouredGraph.build(2, vertices, edges)
        classes = _two_path_classes(graph)
        if all(len(a) == len(b) for a, b in classes.values()):
            break
    else:
        raise EnumerationLimitError(f"no balanced edge set after {attempts} draws")

    pairs = []
    for key in sorted(classes):
        blue_red, red_blue = classes[key]
        shuffled = list(red_blue)
        rng.shuffle(shuffled)
        pairs.extend(zip(blue_red, shuffled))
    C = SquareCollection(graph, frozenset(make_square(graph, x, y) for x, y in pairs))
    assert check_complete(C)
    return graph, C


# -- basic data 2-graphs -----------------------------------------------------

@dataclass(frozen=True)
class BasicData:
    """Basic data (T, q, t, w): T a finite hereditary subset of N^2."""

    T: frozenset[tuple[int, int]]
    q: int
    t: int
    w: Mapping[tuple[int, int], int]

    def __post_init__(self) -> None:
        T = self.T
        if (0, 0) not in T:
            raise DomainError("T must contain 0")
        for a, b in T:
            if a < 0 or b < 0:
                raise DomainError("T must lie in N^2")
            for x in range(a + 1):
                for y in range(b + 1):
                    if (x, y) not in T:
                        raise DomainError(f"T is not hereditary: ({x},{y}) <= ({a},{b}) missing")
        if self.q < 1:
            raise DomainError("q must be positive")
        if set(self.w) != set(T):
            raise DomainError("w must be defined exactly on T")
        d1, d2 = self.corners
        if d1 < 1 or d2 < 1:
            raise DomainError("T needs corners d1 e1 and d2 e2 with d_i >= 1")
        # Over Z/1Z nothing is nonzero; that degenerate case is allowed.
        if self.q > 1 and (self.w[d1, 0] % self.q == 0 or self.w[0, d2] % self.q == 0):
            raise DomainError("w must be nonzero at both corners")

    @property
    def corners(self) -> tuple[int, int]:
        return max(a for a, b in self.T if b == 0), max(b for a, b in self.T if a == 0)

    @property
    def points(self) -> list[tuple[int, int]]:
        return sorted(self.T)


def _window_union(T: Sequence[tuple[int, int]], m: Degree) -> list[tuple[int, int]]:
    """T(m): the union of the translates T + n for 0 <= n <= m."""
    return sorted({(a + n[0], b + n[1]) for n in box(m) for a, b in T})


def window_functions(data: BasicData, m: Degree, budget: int = 10**6) -> list[dict[tuple[int, int], int]]:
    """All lambda: T(m) -> Z/q whose every window T+n (n <= m) has weighted sum t."""
    T = data.points
    domain = _window_union(T, m)
    windows = [[(a + n[0], b + n[1]) for a, b in T] for n in box(m)]
    position = {p: x for x, p in enumerate(domain)}
    # Each window is checked as soon as its last point is assigned.
    ready: dict[int, list[list[tuple[int, int]]]] = defaultdict(list)
    for win in windows:
        ready[max(position[p] for p in win)].append(win)
    q, t = data.q, data.t % data.q
    out: list[dict[tuple[int, int], int]] = []
    values: dict[tuple[int, int], int] = {}

    def rec(x: int) -> None:
        if x == len(domain):
            out.append(dict(values))
            if len(out) > budget:
                raise EnumerationLimitError("too many basic-data paths")
            return
        p = domain[x]
        for value in range(q):
            values[p] = value
            if all(
                sum(data.w[T[i]] * values[pt] for i, pt in enumerate(win)) % q == t
                for win in ready[x]
            ):
                rec(x + 1)
        del values[p]

    rec(0)
    return out


def _encode(values: Mapping[tuple[int, int], int], domain: Sequence[tuple[int, int]], offset: tuple[int, int]) -> str:
    return ".".join(str(values[a + offset[0], b + offset[1]]) for a, b in domain)


class BasicDataCodec:
    """Ids for vertices and edges of the basic-data 2-graph and the map lambda -> mu_lambda."""

    def __init__(self, data: BasicData):
        self.data = data
        self.T = data.points
        self.edge_domains = {i: _window_union(self.T, unit(2, i)) for i in (1, 2)}

    def vertex_id(self, values: Mapping, offset: tuple[int, int] = (0, 0)) -> str:
        return "v[" + _encode(values, self.T, offset) + "]"

    def edge_id(self, colour: int, values: Mapping, offset: tuple[int, int] = (0, 0)) -> str:
        return f"c{colour}[" + _encode(values, self.edge_domains[colour], offset) + "]"

    def decode_vertex(self, vid: str) -> dict[tuple[int, int], int]:
        return dict(zip(self.T, map(int, vid[2:-1].split("."))))


def basic_data_2graph(data: BasicData, budget: int = 10**5) -> Instance:
    """The coloured graph and squares of the basic-data 2-graph Lambda(T, q, t, w).

    Vertices are Lambda^0, colour-i edges are Lambda^{e_i}, and each path of
    degree e_1 + e_2 contributes one square.
    """
    if data.q ** len(data.T) > budget:
        raise EnumerationLimitError(f"q^|T| = {data.q ** len(data.T)} exceeds the budget {budget}")
    codec = BasicDataCodec(data)
    vertices = [codec.vertex_id(lam) for lam in window_functions(data, (0, 0))]
    edges = []
    for i in (1, 2):
        ei = unit(2, i)
        for lam in window_functions(data, ei):
            edges.append((codec.edge_id(i, lam), codec.vertex_id(lam), codec.vertex_id(lam, ei), i))
    graph = ColouredGraph.build(2, vertices, edges)
    squares = set()
    for lam in window_functions(data, (1, 1)):
        squares.add(Square(
            1, 2,
            codec.edge_id(1, lam), codec.edge_id(2, lam, (1, 0)),
            codec.edge_id(2, lam), codec.edge_id(1, lam, (0, 1)),
        ))
    return graph, SquareCollection(graph, frozenset(squares))


@dataclass
class BijectivityReport:
    passed: bool
    counts: dict[str, int]
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.passed


def basic_data_bijectivity(data: BasicData, degree_cap: Degree = (2, 2), budget: int = 10**5) -> BijectivityReport:
    """Check lambda -> mu_lambda is a bijection onto Lambda_(E,C)^m for every m <= degree_cap.

    mu_lambda sends n to the window of lambda at n and n + v_i to the
    T(e_i) window at n.  Both sides are enumerated independently.
    """
    from .category import KGraph, paths_of_degree
    from .cube import CubeMorphism, incompatible_squares, morphism_violations

    graph, C = basic_data_2graph(data, budget)
    L = KGraph(C)
    codec = BasicDataCodec(data)
    counts: dict[str, int] = {}
    for m in box(tuple(degree_cap)):
        images = []
        for lam in window_functions(data, m):
            verts = {n: codec.vertex_id(lam, n) for n in box(m)}
            edges = {
                (n, i): codec.edge_id(i, lam, n)
                for n in box(m)
                for i in (1, 2)
                if n[i - 1] < m[i - 1]
            }
            missing = [e for e in edges.values() if e not in graph.edges]
            if missing or any(v not in graph._vertex_set for v in verts.values()):
                return BijectivityReport(False, counts, {"degree": list(m), "reason": "window is not in the graph"})
            mu = CubeMorphism(C, m, verts, edges)
            if morphism_violations(mu) or incompatible_squares(mu):
                return BijectivityReport(False, counts, {"degree": list(m), "reason": "mu_lambda is not compatible"})
            images.append(mu)
        target = paths_of_degree(L, None, m)
        counts[str(list(m))] = len(images)
        if len(set(images)) != len(images):
            return BijectivityReport(False, counts, {"degree": list(m), "reason": "not injective"})
        if set(images) != set(target):
            return BijectivityReport(False, counts, {"degree": list(m), "reason": "not onto",
                                                     "images": len(images), "paths": len(target)})
    return BijectivityReport(True, counts)
