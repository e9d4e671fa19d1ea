"""The skeleton of a k-graph, the isomorphism rho onto it, and theta between presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .category import KGraph, paths_of_degree, paths_upto
from .cube import CubeMorphism, compose, identity_at, incompatible_squares, morphism_violations, segment
from .errors import PreconditionError
from .graph import ColouredGraph, ColouredIsomorphism, Degree, add, unit, zero
from .squares import Square, SquareCollection, check_associative, check_complete


def vertex_name(lam: CubeMorphism) -> str:
    """Skeleton id of a degree-0 path."""
    return "<" + lam.r() + ">"


def edge_name(lam: CubeMorphism) -> str:
    """Skeleton id of a degree-e_i path."""
    return "<" + lam.canonical_id() + ">"


@dataclass(frozen=True)
class Skeleton:
    graph: ColouredGraph
    squares: SquareCollection
    paths: Mapping[str, CubeMorphism] = field(repr=False)

    def counts(self) -> tuple[int, int, int]:
        return len(self.graph.vertices), len(self.graph.edges), len(self.squares.squares)


def _unit_segments(lam: CubeMorphism, i: int, j: int) -> tuple[CubeMorphism, ...]:
    k = len(lam.degree)
    ei, ej = unit(k, i), unit(k, j)
    eij = add(ei, ej)
    o = zero(k)
    return segment(lam, o, ei), segment(lam, ei, eij), segment(lam, o, ej), segment(lam, ej, eij)


def extract_skeleton(L: KGraph) -> Skeleton:
    """Vertices from Lambda^0, edges from Lambda^{e_i}, squares from Lambda^{e_i+e_j}."""
    k = L.k
    paths: dict[str, CubeMorphism] = {}
    vertices = []
    for v in L.vertices:
        lam = identity_at(L.collection, v)
        vertices.append(vertex_name(lam))
        paths[vertex_name(lam)] = lam
    edges = []
    for i in range(1, k + 1):
        for lam in paths_of_degree(L, None, unit(k, i)):
            name = edge_name(lam)
            paths[name] = lam
            edges.append((name, "<" + lam.r() + ">", "<" + lam.s() + ">", i))
    graph = ColouredGraph.build(k, vertices, edges)
    squares = set()
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            for lam in paths_of_degree(L, None, add(unit(k, i), unit(k, j))):
                a, b, b2, a2 = (edge_name(x) for x in _unit_segments(lam, i, j))
                squares.add(Square(i, j, a, b, b2, a2))
    return Skeleton(graph, SquareCollection(graph, frozenset(squares)), paths)


@dataclass
class CheckReport:
    passed: bool
    checked: dict[str, int] = field(default_factory=dict)
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "violation": self.violation}


def rho(L: KGraph) -> ColouredIsomorphism:
    """v -> <lambda_v>, f -> <lambda_f> (as maps on ids)."""
    from .cube import edge_morphism

    C = L.collection
    return ColouredIsomorphism(
        {v: vertex_name(identity_at(C, v)) for v in L.vertices},
        {f: edge_name(edge_morphism(C, f)) for f in L.graph.edges},
    )


def invert(iso: ColouredIsomorphism) -> ColouredIsomorphism:
    return ColouredIsomorphism(
        {b: a for a, b in iso.vertex_map.items()},
        {b: a for a, b in iso.edge_map.items()},
    )


def then(first: ColouredIsomorphism, second: ColouredIsomorphism) -> ColouredIsomorphism:
    """The composite ``second o first``."""
    return ColouredIsomorphism(
        {a: second.vertex_map[b] for a, b in first.vertex_map.items()},
        {a: second.edge_map[b] for a, b in first.edge_map.items()},
    )


def _iso_problem(g1: ColouredGraph, g2: ColouredGraph, iso: ColouredIsomorphism) -> dict | None:
    vm, em = iso.vertex_map, iso.edge_map
    if set(vm) != set(g1.vertices) or sorted(vm.values()) != sorted(g2.vertices):
        return {"reason": "vertex map is not a bijection"}
    if set(em) != set(g1.edges) or sorted(em.values()) != sorted(g2.edges):
        return {"reason": "edge map is not a bijection"}
    for e, e2 in em.items():
        if g1.c(e) != g2.c(e2) or vm[g1.r(e)] != g2.r(e2) or vm[g1.s(e)] != g2.s(e2):
            return {"reason": "edge map breaks colour, range or source", "edge": e, "image": e2}
    return None


def _map_square(sq: Square, emap: Mapping[str, str]) -> Square:
    return Square(sq.i, sq.j, emap[sq.a], emap[sq.b], emap[sq.b2], emap[sq.a2])


def verify_rho(graph: ColouredGraph, C: SquareCollection) -> CheckReport:
    """Build Lambda_(E,C), take its skeleton and check rho against it."""
    L = KGraph(C)
    S = extract_skeleton(L)
    checked = {"vertices": len(graph.vertices), "edges": len(graph.edges), "squares": 0}
    sk_report = check_complete(S.squares)
    if not sk_report:
        return CheckReport(False, checked, {"reason": "skeleton squares incomplete",
                                            "paths": [list(p) for p, _ in sk_report.violations[:5]]})
    assoc = check_associative(S.squares)
    if not assoc:
        return CheckReport(False, checked, {"reason": "skeleton squares not associative",
                                            **assoc.violations[0].as_dict()})
    r = rho(L)
    problem = _iso_problem(graph, S.graph, r)
    if problem:
        return CheckReport(False, checked, problem)
    for sq in sorted(C.squares):
        image = _map_square(sq, r.edge_map)
        checked["squares"] += 1
        if image not in S.squares.squares:
            return CheckReport(False, checked, {"reason": "square not carried into the skeleton",
                                                "square": repr(sq)})
    if len(C.squares) != len(S.squares.squares):
        return CheckReport(False, checked, {"reason": "square counts differ",
                                            "collection": len(C.squares),
                                            "skeleton": len(S.squares.squares)})
    return CheckReport(True, checked)


@dataclass
class ThetaReport(CheckReport):
    table: dict[tuple, CubeMorphism] = field(default_factory=dict, repr=False)

    def image(self, gamma: CubeMorphism) -> CubeMorphism:
        return self.table[gamma.key]


def build_theta(
    gamma_graph: KGraph,
    graph: ColouredGraph,
    C: SquareCollection,
    psi: ColouredIsomorphism,
    degree_bound: int = 4,
) -> ThetaReport:
    """Emit theta_gamma for every gamma with |d| <= degree_bound and verify it.

    ``psi`` maps the skeleton of ``gamma_graph`` (ids as produced by
    ``extract_skeleton``) onto ``graph`` and must carry skeleton squares
    into ``C``.
    """
    S = extract_skeleton(gamma_graph)
    problem = _iso_problem(S.graph, graph, psi)
    if problem:
        raise PreconditionError(f"psi is not a coloured-graph isomorphism: {problem}")
    for sq in sorted(S.squares.squares):
        if _map_square(sq, psi.edge_map) not in C.squares:
            raise PreconditionError(f"psi does not carry the square {sq} into the collection")

    target = KGraph(C)
    k = gamma_graph.k
    table: dict[tuple, CubeMorphism] = {}
    checked = {"emitted": 0, "degrees": 0, "functoriality": 0}

    def fail(**detail) -> ThetaReport:
        return ThetaReport(False, checked, {x: repr(y) for x, y in detail.items()}, table)

    def theta(gam: CubeMorphism) -> CubeMorphism:
        m = gam.degree
        verts = {n: psi.vertex_map["<" + v + ">"] for n, v in gam.vertex_map.items()}
        edges = {}
        for (n, c) in gam.edge_map:
            piece = segment(gam, n, add(n, unit(k, c)))
            edges[n, c] = psi.edge_map[edge_name(piece)]
        return CubeMorphism(C, m, verts, edges)

    by_degree: dict[Degree, list[CubeMorphism]] = {}
    for gam in paths_upto(gamma_graph, degree_bound):
        image = theta(gam)
        checked["emitted"] += 1
        if morphism_violations(image) or incompatible_squares(image):
            return fail(reason="theta_gamma is not a compatible morphism", gamma=gam)
        if (
            image.degree != gam.degree
            or image.r() != psi.vertex_map["<" + gam.r() + ">"]
            or image.s() != psi.vertex_map["<" + gam.s() + ">"]
        ):
            return fail(reason="theta does not preserve d, r, s", gamma=gam)
        table[gam.key] = image
        by_degree.setdefault(gam.degree, []).append(image)

    for m, images in sorted(by_degree.items()):
        checked["degrees"] += 1
        if len(set(images)) != len(images):
            return fail(reason="theta not injective", degree=m)
        if set(images) != set(paths_of_degree(target, None, m)):
            return fail(reason="theta not onto", degree=m)

    everything = paths_upto(gamma_graph, degree_bound)
    for mu in everything:
        for nu in everything:
            if mu.s() != nu.r() or sum(mu.degree) + sum(nu.degree) > degree_bound:
                continue
            checked["functoriality"] += 1
            lhs = table[compose(mu, nu).key]
            rhs = compose(table[mu.key], table[nu.key])
            if lhs != rhs:
                return fail(reason="theta not functorial", mu=mu, nu=nu)
    return ThetaReport(True, checked, None, table)


def presentation_psi(gamma_graph: KGraph, iso: ColouredIsomorphism) -> ColouredIsomorphism:
    """Turn an isomorphism of presentations E_Gamma -> E into one on the skeleton of Gamma."""
    return then(invert(rho(gamma_graph)), iso)
