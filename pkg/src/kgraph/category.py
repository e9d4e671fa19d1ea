"""The k-graph Lambda_(E,C) as a category: hom-sets by degree and law checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cube import CubeMorphism, compose, extend, factorise, identity_at, segment
from .errors import EnumerationLimitError, PreconditionError, UnknownIdError
from .graph import ColouredGraph, Degree, box, degrees_upto, sub, unit
from .squares import SquareCollection, check_associative, check_complete


class KGraph:
    """A validated pair (E, C) standing for the k-graph Lambda_(E,C).

    Hom-sets ``v Lambda^m`` are memoised per instance; the memo is the only
    state and never changes an answer.
    """

    def __init__(self, collection: SquareCollection, validate: bool = True):
        self.collection = collection
        self.complete = bool(check_complete(collection)) if validate else True
        self.associative = (
            bool(check_associative(collection)) if validate and self.complete else self.complete
        )
        if not (self.complete and self.associative):
            raise PreconditionError(
                "square collection must be complete and associative "
                f"(complete={self.complete}, associative={self.associative})"
            )
        self._homs: dict[tuple[str, Degree], tuple[CubeMorphism, ...]] = {}
        self.enumeration_budget = 200_000

    @classmethod
    def of(cls, graph: ColouredGraph, collection: SquareCollection) -> KGraph:
        if collection.graph is not graph and collection.graph != graph:
            raise PreconditionError("collection is defined on a different graph")
        return cls(collection)

    @property
    def graph(self) -> ColouredGraph:
        return self.collection.graph

    @property
    def k(self) -> int:
        return self.graph.k

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    def hom(self, v: str, m: Degree) -> tuple[CubeMorphism, ...]:
        """v Lambda^m, sorted by canonical encoding."""
        m = tuple(m)
        key = (v, m)
        if key in self._homs:
            return self._homs[key]
        if not self.graph.has_vertex(v):
            raise UnknownIdError(f"unknown vertex {v!r}")
        if len(m) != self.k or any(a < 0 for a in m):
            raise ValueError(f"bad degree {m}")
        if sum(m) == 0:
            out: tuple[CubeMorphism, ...] = (identity_at(self.collection, v),)
        else:
            # Extend along the word c_1^{m_1} ... c_k^{m_k}: the last letter is
            # the highest colour present.
            c = max(i for i in range(1, self.k + 1) if m[i - 1] > 0)
            shorter = self.hom(v, sub(m, unit(self.k, c)))
            found = set()
            for lam in shorter:
                for f in self.graph.edges_at(lam.s(), c):
                    found.add(extend(lam, f))
            out = tuple(sorted(found))
        total = sum(len(x) for x in self._homs.values()) + len(out)
        if total > self.enumeration_budget:
            raise EnumerationLimitError(
                f"enumerated more than {self.enumeration_budget} paths"
            )
        self._homs[key] = out
        return out


def paths_of_degree(L: KGraph, v: str | None, m: Degree) -> list[CubeMorphism]:
    """v Lambda^m, or Lambda^m when ``v`` is None."""
    vertices = L.vertices if v is None else [v]
    out = []
    for u in vertices:
        out.extend(L.hom(u, m))
    return sorted(out)


def paths_upto(L: KGraph, bound: int, v: str | None = None) -> list[CubeMorphism]:
    """All paths with |d| <= bound."""
    out = []
    for m in degrees_upto(tuple([bound] * L.k)):
        if sum(m) <= bound:
            out.extend(paths_of_degree(L, v, m))
    return out


@dataclass
class RowFinitenessReport:
    holds: bool
    violations: list[tuple[str, int]]

    def __bool__(self) -> bool:
        return self.holds


def is_row_finite_no_sources(L: KGraph | tuple[ColouredGraph, SquareCollection] | ColouredGraph) -> RowFinitenessReport:
    """Every vertex must receive at least one edge of every colour.

    Finite graphs are automatically row-finite, so only sources can fail.
    """
    if isinstance(L, KGraph):
        g = L.graph
    elif isinstance(L, tuple):
        g = L[0]
    else:
        g = L
    violations = [
        (v, c) for v in g.vertices for c in range(1, g.k + 1) if not g.edges_at(v, c)
    ]
    return RowFinitenessReport(not violations, violations)


@dataclass
class LawReport:
    passed: bool
    checked: dict[str, int] = field(default_factory=dict)
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.passed


class _Composer:
    def __init__(self) -> None:
        self.cache: dict[tuple, CubeMorphism] = {}

    def __call__(self, mu: CubeMorphism, nu: CubeMorphism) -> CubeMorphism:
        key = (mu.key, nu.key)
        if key not in self.cache:
            self.cache[key] = compose(mu, nu)
        return self.cache[key]


def check_category_laws(
    L: KGraph,
    degree_bound: int = 4,
    sample_budget: int = 0,
    sample_degree: int = 6,
    seed: int = 0,
) -> LawReport:
    """Identity, associativity, functoriality of d and unique factorisation.

    Exhaustive over paths with |d| <= degree_bound; then ``sample_budget``
    random composable triples with |d| up to ``sample_degree``.
    """
    comp = _Composer()
    checked = {"identity": 0, "degree": 0, "associativity": 0, "factorisation": 0}
    k = L.k

    def fail(kind: str, **detail) -> LawReport:
        return LawReport(False, checked, {"law": kind, **{x: repr(y) for x, y in detail.items()}})

    everything = paths_upto(L, degree_bound)
    for lam in everything:
        left = comp(identity_at(L.collection, lam.r()), lam)
        right = comp(lam, identity_at(L.collection, lam.s()))
        checked["identity"] += 1
        if left != lam or right != lam:
            return fail("identity", path=lam)
        d = lam.degree
        for m1 in box(d):
            a, rest = factorise(lam, m1)
            if comp(a, rest) != lam:
                return fail("factorise-compose", path=lam, split=m1)
            ab = comp(a, rest)
            checked["degree"] += 1
            if ab.degree != d or ab.r() != a.r() or ab.s() != rest.s():
                return fail("degree", path=lam, split=m1)
            for m2 in box(d, m1):
                b = segment(lam, m1, m2)
                c = segment(lam, m2, d)
                x = comp(comp(a, b), c)
                y = comp(a, comp(b, c))
                checked["associativity"] += 1
                if x != y or x != lam:
                    return fail("associativity", path=lam, splits=(m1, m2))

    # Unique factorisation: composition is a bijection from composable
    # pairs of degrees (m, n - m) onto Lambda^n.
    for n in degrees_upto(tuple([degree_bound] * k)):
        if sum(n) > degree_bound:
            continue
        target = set(paths_of_degree(L, None, n))
        for m in box(n):
            images = []
            for mu in paths_of_degree(L, None, m):
                for nu in L.hom(mu.s(), sub(n, m)):
                    images.append(comp(mu, nu))
            checked["factorisation"] += 1
            if len(set(images)) != len(images):
                return fail("factorisation-not-unique", degree=n, split=m)
            if set(images) != target:
                return fail("factorisation-not-onto", degree=n, split=m)

    rng = random.Random(seed)
    for _ in range(sample_budget):
        parts = []
        v = rng.choice(L.vertices)
        for _ in range(3):
            m = tuple(rng.randint(0, max(0, sample_degree // (3 * k))) for _ in range(k))
            options = L.hom(v, m)
            if not options:
                break
            part = rng.choice(options)
            parts.append(part)
            v = part.s()
        if len(parts) < 3:
            continue
        a, b, c = parts
        checked["associativity"] += 1
        if comp(comp(a, b), c) != comp(a, comp(b, c)):
            return fail("associativity", triple=(a, b, c))
    return LawReport(True, checked)
