"""Commuting squares, complete collections, flips and the cube condition."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import DomainError, MalformedCollectionError, MissingSquareError, PreconditionError
from .graph import ColouredGraph, ColouredPath, Degree, unit, add


@dataclass(frozen=True, order=True)
class Square:
    """An {i,j}-square with i < j, stored by its four edges.

    ``a`` sits at 0+v_i, ``b`` at e_i+v_j, ``b2`` at 0+v_j and ``a2`` at
    e_j+v_i, so the two faces are ``a b`` and ``b2 a2``.
    """

    i: int
    j: int
    a: str
    b: str
    b2: str
    a2: str

    @property
    def ci_first(self) -> tuple[str, str]:
        return (self.a, self.b)

    @property
    def cj_first(self) -> tuple[str, str]:
        return (self.b2, self.a2)

    def vertices(self, graph: ColouredGraph) -> dict[Degree, str]:
        k = graph.k
        ei, ej = unit(k, self.i), unit(k, self.j)
        zero = (0,) * k
        return {
            zero: graph.r(self.a),
            ei: graph.s(self.a),
            ej: graph.s(self.b2),
            add(ei, ej): graph.s(self.b),
        }

    def edge_map(self, k: int) -> dict[tuple[Degree, int], str]:
        """The square as a morphism out of the unit grid E_{k, e_i+e_j}."""
        zero = (0,) * k
        return {
            (zero, self.i): self.a,
            (unit(k, self.i), self.j): self.b,
            (zero, self.j): self.b2,
            (unit(k, self.j), self.i): self.a2,
        }


def make_square(graph: ColouredGraph, first: tuple[str, str], second: tuple[str, str]) -> Square:
    """Build the square with faces ``first ~ second`` in either colour order."""
    x1, x2 = first
    y1, y2 = second
    ci, cj = graph.c(x1), graph.c(x2)
    if ci > cj:
        (x1, x2), (y1, y2) = (y1, y2), (x1, x2)
        ci, cj = cj, ci
    square = Square(ci, cj, x1, x2, y1, y2)
    _check_square(graph, square)
    return square


def _check_square(graph: ColouredGraph, sq: Square) -> None:
    for e in (sq.a, sq.b, sq.b2, sq.a2):
        if e not in graph.edges:
            raise MalformedCollectionError(f"square {sq} references missing edge {e!r}")
    if not 1 <= sq.i < sq.j <= graph.k:
        raise MalformedCollectionError(f"square {sq} needs colours 1 <= i < j <= {graph.k}")
    c, r, s = graph.c, graph.r, graph.s
    if (c(sq.a), c(sq.a2), c(sq.b), c(sq.b2)) != (sq.i, sq.i, sq.j, sq.j):
        raise MalformedCollectionError(f"square {sq} has edges of the wrong colour")
    if not (r(sq.a) == r(sq.b2) and s(sq.a) == r(sq.b) and s(sq.b2) == r(sq.a2) and s(sq.b) == s(sq.a2)):
        raise MalformedCollectionError(f"square {sq} does not commute as a graph morphism")


@dataclass(frozen=True)
class SquareCollection:
    graph: ColouredGraph = field(repr=False)
    squares: frozenset[Square]

    def __post_init__(self) -> None:
        for sq in self.squares:
            _check_square(self.graph, sq)

    @classmethod
    def from_faces(cls, graph: ColouredGraph, pairs: Iterable[tuple[tuple[str, str], tuple[str, str]]]) -> SquareCollection:
        return cls(graph, frozenset(make_square(graph, x, y) for x, y in pairs))

    @cached_property
    def owners(self) -> Mapping[tuple[str, str], tuple[Square, ...]]:
        """Both faces of every square, mapped to the squares they belong to."""
        table: dict[tuple[str, str], list[Square]] = defaultdict(list)
        for sq in sorted(self.squares):
            table[sq.ci_first].append(sq)
            table[sq.cj_first].append(sq)
        return {face: tuple(sqs) for face, sqs in table.items()}

    def owner(self, e1: str, e2: str) -> Square:
        sqs = self.owners.get((e1, e2))
        if not sqs:
            raise MissingSquareError((e1, e2))
        return sqs[0]

    @cached_property
    def _flips(self) -> Mapping[tuple[str, str], tuple[str, str]]:
        table = {}
        for face, sqs in self.owners.items():
            sq = sqs[0]
            table[face] = sq.cj_first if face == sq.ci_first else sq.ci_first
        return table

    def flip_pair(self, e1: str, e2: str) -> tuple[str, str]:
        """The other face of the square owning ``e1 e2``."""
        try:
            return self._flips[e1, e2]
        except KeyError:
            raise MissingSquareError((e1, e2)) from None

    def mixed_paths(self) -> Iterator[tuple[str, str]]:
        g = self.graph
        for e1 in sorted(g.edges):
            for e2 in g.edges_at(g.s(e1)):
                if g.c(e2) != g.c(e1):
                    yield (e1, e2)

    @cached_property
    def is_complete(self) -> bool:
        return check_complete(self).complete

    @cached_property
    def is_associative(self) -> bool:
        return self.is_complete and check_associative(self).associative


@dataclass(frozen=True)
class CompletenessReport:
    complete: bool
    violations: list[tuple[tuple[str, str], int]]

    def __bool__(self) -> bool:
        return self.complete


def check_complete(C: SquareCollection) -> CompletenessReport:
    """Every mixed-colour two-edge path must be a face of exactly one square.

    Violations are ``(path, owner_count)`` with owner_count 0 or >= 2.
    """
    violations = []
    for path in C.mixed_paths():
        owners = len(C.owners.get(path, ()))
        if owners != 1:
            violations.append((path, owners))
    return CompletenessReport(not violations, violations)


def flip(C: SquareCollection, x: ColouredPath) -> ColouredPath:
    if len(x.edges) != 2:
        raise DomainError(f"flip needs a path of length 2, got {len(x.edges)}")
    e1, e2 = x.edges
    g = C.graph
    if g.s(e1) != g.r(e2) or g.c(e1) == g.c(e2):
        raise DomainError(f"{e1}.{e2} is not a composable mixed-colour path")
    try:
        y = C.flip_pair(e1, e2)
    except MissingSquareError as exc:
        raise DomainError(str(exc)) from exc
    return ColouredPath(g, y)


@dataclass(frozen=True)
class CubeViolation:
    triple: tuple[str, str, str]
    route_upper: tuple[str, str, str]
    route_lower: tuple[str, str, str]

    def as_dict(self) -> dict:
        return {
            "triple": list(self.triple),
            "route_upper": list(self.route_upper),
            "route_lower": list(self.route_lower),
        }


@dataclass(frozen=True)
class AssociativityReport:
    associative: bool
    violations: list[CubeViolation]

    def __bool__(self) -> bool:
        return self.associative


def tricoloured_paths(C: SquareCollection) -> Iterator[tuple[str, str, str]]:
    g = C.graph
    for f in sorted(g.edges):
        cf = g.c(f)
        for gg in g.edges_at(g.s(f)):
            cg = g.c(gg)
            if cg == cf:
                continue
            for h in g.edges_at(g.s(gg)):
                if g.c(h) not in (cf, cg):
                    yield (f, gg, h)


def cube_routes(C: SquareCollection, f: str, g: str, h: str) -> tuple[tuple[str, str, str], tuple[str, str, str]]:
    """The two rearrangements of ``fgh`` into ``h g f`` order, via three flips each."""
    g1, f1 = C.flip_pair(f, g)
    h1, f2 = C.flip_pair(f1, h)
    h2, g2 = C.flip_pair(g1, h1)
    upper = (h2, g2, f2)

    h_1, g_1 = C.flip_pair(g, h)
    h_2, f_1 = C.flip_pair(f, h_1)
    g_2, f_2 = C.flip_pair(f_1, g_1)
    lower = (h_2, g_2, f_2)
    return upper, lower


def check_associative(C: SquareCollection, exhaustive: bool = False) -> AssociativityReport:
    """Compare both rearrangement routes for every tri-coloured path.

    Stops at the first violation (in lexicographic triple order) unless
    ``exhaustive`` is set.
    """
    report = check_complete(C)
    if not report:
        raise PreconditionError(
            f"collection is incomplete ({len(report.violations)} violations)"
        )
    violations = []
    for triple in tricoloured_paths(C):
        upper, lower = cube_routes(C, *triple)
        if upper != lower:
            violations.append(CubeViolation(triple, upper, lower))
            if not exhaustive:
                break
    return AssociativityReport(not violations, violations)
