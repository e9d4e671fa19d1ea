"""Bounded deciders for aperiodicity and cofinality, separating paths and the simplicity verdict.

Every verdict is three-valued.  ``fails`` always carries a witness that
can be re-checked independently; ``inconclusive`` records the bounds at
which the search stopped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator

from .category import KGraph, is_row_finite_no_sources, paths_of_degree
from .cube import CubeMorphism, compose, identity_at, prefix_word, segment
from .errors import DomainError, EnumerationLimitError, InconclusiveError, PreconditionError
from .graph import Degree, add, box, join, leq, sub, zero
from .quotient import PathPrefixFamily, extend_pi

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"


@dataclass
class AnalysisVerdict:
    status: str
    witness: Any = None
    bounds: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        witness = self.witness.as_dict() if hasattr(self.witness, "as_dict") else self.witness
        return {"status": self.status, "witness": witness, "bounds": self.bounds, "detail": self.detail}


def _require_rfns(L: KGraph) -> None:
    report = is_row_finite_no_sources(L)
    if not report:
        raise PreconditionError(
            f"needs a row-finite graph with no sources; missing (vertex, colour) {report.violations[:4]}"
        )


# -- aperiodicity ------------------------------------------------------------


@dataclass(frozen=True)
class PeriodicityWitness:
    """Every lambda in v Lambda with m v n <= d(lambda) <= bound has equal shifted segments."""

    v: str
    m: Degree
    n: Degree
    bound: Degree

    def as_dict(self) -> dict:
        return {"v": self.v, "m": list(self.m), "n": list(self.n), "bound": list(self.bound)}

    def reverify(self, L: KGraph) -> bool:
        """Re-enumerate v Lambda^d for every m v n <= d <= bound and compare segments."""
        top = join(self.m, self.n)
        if self.m == self.n or not leq(top, self.bound):
            return False
        for d in box(self.bound, top):
            for lam in L.hom(self.v, d):
                if _separates(lam, self.m, self.n):
                    return False
        return True


def _separates(lam: CubeMorphism, m: Degree, n: Degree) -> bool:
    extra = sub(lam.degree, join(m, n))
    return segment(lam, m, add(m, extra)) != segment(lam, n, add(n, extra))


def _degrees_between(lower: Degree, upper: Degree) -> list[Degree]:
    """lower <= d <= upper, by increasing |d| then lexicographically."""
    return sorted(box(upper, lower), key=lambda d: (sum(d), d))


def _unordered_pairs(bound: Degree) -> Iterator[tuple[Degree, Degree]]:
    return itertools.combinations(list(box(bound)), 2)


def find_separator(L: KGraph, v: str, m: Degree, n: Degree, path_bound: Degree) -> CubeMorphism | None:
    """The first lambda in v Lambda (shortest degree first) separating the pair (m, n)."""
    top = join(m, n)
    for d in _degrees_between(top, path_bound):
        for lam in L.hom(v, d):
            if _separates(lam, m, n):
                return lam
    return None


def check_aperiodic(
    L: KGraph,
    pair_bound: Degree,
    path_bound: Degree,
    exhaustive: bool = False,
) -> AnalysisVerdict:
    """Search a separating path for every vertex and pair m != n <= pair_bound.

    A pair with no separator up to ``path_bound`` yields ``fails`` with a
    PeriodicityWitness (periodic up to the bound).  A pair whose join is
    not below ``path_bound`` cannot be tested and makes the verdict
    ``inconclusive`` unless a failure was found.
    """
    _require_rfns(L)
    pair_bound, path_bound = tuple(pair_bound), tuple(path_bound)
    bounds = {"pair_bound": list(pair_bound), "path_bound": list(path_bound)}
    witnesses: list[PeriodicityWitness] = []
    untested: list[dict] = []
    separated = 0
    for v in L.vertices:
        for m, n in _unordered_pairs(pair_bound):
            if not leq(join(m, n), path_bound):
                untested.append({"v": v, "m": list(m), "n": list(n), "reason": "join exceeds path bound"})
                continue
            try:
                lam = find_separator(L, v, m, n, path_bound)
            except EnumerationLimitError as exc:
                untested.append({"v": v, "m": list(m), "n": list(n), "reason": str(exc)})
                continue
            if lam is None:
                witnesses.append(PeriodicityWitness(v, m, n, path_bound))
                if not exhaustive:
                    return AnalysisVerdict(FAILS, witnesses[0], bounds, {"separated": separated})
            else:
                separated += 1
    detail = {"separated": separated}
    if witnesses:
        detail["all_witnesses"] = [w.as_dict() for w in witnesses]
        return AnalysisVerdict(FAILS, witnesses[0], bounds, detail)
    if untested:
        detail["untested"] = untested
        return AnalysisVerdict(INCONCLUSIVE, None, bounds, detail)
    return AnalysisVerdict(HOLDS, None, bounds, detail)


# -- separating paths --------------------------------------------------------


def paths_into(L: KGraph, v: str, bound: Degree) -> list[CubeMorphism]:
    """Lambda v restricted to degrees <= bound."""
    out = []
    for d in box(bound):
        out.extend(lam for lam in paths_of_degree(L, None, d) if lam.s() == v)
    return out


def separation_failures(L: KGraph, v: str, lam: CubeMorphism, l: Degree) -> list[tuple[CubeMorphism, CubeMorphism]]:
    """Pairs alpha != beta in Lambda v, d <= l, whose (alpha lam)(0, d(lam)) coincide."""
    seen: dict[tuple[str, ...], CubeMorphism] = {}
    clashes = []
    for alpha in paths_into(L, v, l):
        head = prefix_word(alpha, lam, lam.degree)
        if head in seen:
            clashes.append((seen[head], alpha))
        else:
            seen[head] = alpha
    return clashes


def separating_path(L: KGraph, v: str, l: Degree, search_bound: Degree) -> CubeMorphism:
    """A path lambda at v with d(lambda) >= l separating all distinct alpha, beta in Lambda v, d <= l.

    Concatenates one separator per unordered pair of degrees below l,
    each found at the current source, then any path of degree l.  The
    result is checked by brute force before it is returned.
    """
    _require_rfns(L)
    l, search_bound = tuple(l), tuple(search_bound)
    pieces: list[CubeMorphism] = []
    here = v
    for m, n in _unordered_pairs(l):
        if not leq(join(m, n), search_bound):
            raise InconclusiveError(
                "search bound is below the pair's join",
                {"v": here, "m": list(m), "n": list(n), "search_bound": list(search_bound)},
            )
        mu = find_separator(L, here, m, n, search_bound)
        if mu is None:
            raise InconclusiveError(
                "no separator for this pair within the search bound",
                {"v": here, "m": list(m), "n": list(n), "search_bound": list(search_bound)},
            )
        pieces.append(mu)
        here = mu.s()
    tail = L.hom(here, l)
    if not tail:
        raise InconclusiveError("no path of degree l at the final vertex", {"v": here, "l": list(l)})
    pieces.append(tail[0])
    lam = identity_at(L.collection, v)
    for piece in pieces:
        lam = compose(lam, piece)
    clashes = separation_failures(L, v, lam, l)
    if clashes:
        raise InconclusiveError(
            "constructed path does not separate",
            {"alpha": repr(clashes[0][0]), "beta": repr(clashes[0][1])},
        )
    return lam


# -- cofinality --------------------------------------------------------------


def reachable(L: KGraph, v: str) -> frozenset[str]:
    """R(v) = {u : v Lambda u nonempty}, following edges from range to source."""
    g = L.graph
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for e in g.edges_at(u):
            s = g.s(e)
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return frozenset(seen)


def avoiding_core(L: KGraph, avoid: frozenset[str]) -> frozenset[str]:
    """Largest set of vertices outside ``avoid`` where every vertex receives every colour from inside the set.

    From any vertex of the core, paths of every degree exist that stay in
    the core, so they never come back into ``avoid``.
    """
    g = L.graph
    core = set(g.vertices) - set(avoid)
    changed = True
    while changed:
        changed = False
        for u in sorted(core):
            ok = all(
                any(g.s(e) in core for e in g.edges_at(u, c)) for c in range(1, g.k + 1)
            )
            if not ok:
                core.discard(u)
                changed = True
    return frozenset(core)


def sources_of_degree(L: KGraph, w: str, n: Degree) -> frozenset[str]:
    """{s(lambda) : lambda in w Lambda^n}, walking one staircase word."""
    g = L.graph
    frontier = {w}
    for c, count in enumerate(n, start=1):
        for _ in range(count):
            frontier = {g.s(e) for u in frontier for e in g.edges_at(u, c)}
    return frozenset(frontier)


@dataclass(frozen=True)
class CofinalityCertificate:
    """v Lambda s(lambda) is empty for arbitrarily deep lambda in w Lambda."""

    v: str
    w: str
    reachable_from_v: frozenset[str]
    core: frozenset[str]

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "w": self.w,
            "reachable_from_v": sorted(self.reachable_from_v),
            "core": sorted(self.core),
        }

    def reverify(self, L: KGraph) -> bool:
        g = L.graph
        if reachable(L, self.v) != self.reachable_from_v:
            return False
        if self.w not in self.core or self.core & self.reachable_from_v:
            return False
        return all(
            any(g.s(e) in self.core for e in g.edges_at(u, c))
            for u in self.core
            for c in range(1, g.k + 1)
        )


def check_cofinal(L: KGraph, n_bound: Degree) -> AnalysisVerdict:
    _require_rfns(L)
    n_bound = tuple(n_bound)
    bounds = {"n_bound": list(n_bound)}
    witnessed: dict[str, list[int]] = {}
    open_pairs = []
    for v in L.vertices:
        R = reachable(L, v)
        core = avoiding_core(L, R)
        for w in L.vertices:
            if w in core:
                cert = CofinalityCertificate(v, w, R, core)
                return AnalysisVerdict(FAILS, cert, bounds, {"witnessed_pairs": len(witnessed)})
            found = None
            for n in _degrees_between(zero(L.k), n_bound):
                if sources_of_degree(L, w, n) <= R:
                    found = n
                    break
            if found is None:
                open_pairs.append({"v": v, "w": w})
            else:
                witnessed[f"{v}|{w}"] = list(found)
    detail = {"witnessed_pairs": len(witnessed), "n_for_pair": witnessed}
    if open_pairs:
        detail["open_pairs"] = open_pairs
        return AnalysisVerdict(INCONCLUSIVE, None, bounds, detail)
    return AnalysisVerdict(HOLDS, None, bounds, detail)


def noncofinal_ray(L: KGraph, v: str, w: str, depth: int) -> PathPrefixFamily:
    """A path from w made of ``depth`` blocks of degree (1,...,1), never re-entering R(v)."""
    R = reachable(L, v)
    core = avoiding_core(L, R)
    if w not in core:
        raise DomainError(f"no certified cofinality failure for the pair ({v}, {w})")
    g = L.graph
    edges = []
    u = w
    for _ in range(depth):
        for c in range(1, g.k + 1):
            e = next(e for e in g.edges_at(u, c) if g.s(e) in core)
            edges.append(e)
            u = g.s(e)
    return extend_pi(L.collection, edges, w)


# -- simplicity --------------------------------------------------------------


def simplicity_verdict(
    L: KGraph,
    pair_bound: Degree,
    path_bound: Degree,
    n_bound: Degree,
) -> AnalysisVerdict:
    """Simple exactly when aperiodic and cofinal; either failure settles 'not simple'."""
    aperiodic = check_aperiodic(L, pair_bound, path_bound)
    cofinal = check_cofinal(L, n_bound)
    bounds = {**aperiodic.bounds, **cofinal.bounds}
    witness = {"aperiodic": aperiodic.as_dict(), "cofinal": cofinal.as_dict()}
    if aperiodic.status == FAILS or cofinal.status == FAILS:
        status = FAILS
    elif aperiodic.status == HOLDS and cofinal.status == HOLDS:
        status = HOLDS
    else:
        status = INCONCLUSIVE
    return AnalysisVerdict(status, witness, bounds, {"simple": status == HOLDS})
