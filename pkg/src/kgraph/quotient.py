"""Path words modulo flips: shuffles, swap chains, the quotient category and prefix families."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .category import KGraph, is_row_finite_no_sources
from .cube import (
    CubeMorphism,
    _as_path,
    compose,
    extend,
    identity_at,
    normalize,
    restrict,
    traversal,
)
from .errors import DomainError, KGraphError, OracleOverflow, PreconditionError
from .graph import ColouredGraph, ColouredPath, ColourWord, Degree, abelianize, leq, validate_path
from .squares import SquareCollection

# -- words -------------------------------------------------------------------


def shuffle_chain(w: Sequence[int], w2: Sequence[int]) -> list[ColourWord]:
    """Adjacent transpositions turning ``w`` into ``w2``, endpoints included.

    Bubble sort towards the target: bring the first occurrence of the
    target's head letter to the front, then recurse on the tails.  Each
    step swaps two different letters.
    """
    w, w2 = tuple(w), tuple(w2)
    k = max((*w, *w2), default=1)
    if abelianize(w, k) != abelianize(w2, k):
        raise DomainError(f"{w} and {w2} have different letter counts")
    chain = [w]
    current = list(w)
    for start in range(len(w2)):
        j = current.index(w2[start], start)
        while j > start:
            current[j - 1], current[j] = current[j], current[j - 1]
            j -= 1
            chain.append(tuple(current))
    return chain


def is_transposition_chain(chain: Sequence[Sequence[int]], w: Sequence[int], w2: Sequence[int]) -> bool:
    """Oracle: endpoints match and neighbours differ by one adjacent swap of distinct letters."""
    if not chain or tuple(chain[0]) != tuple(w) or tuple(chain[-1]) != tuple(w2):
        return False
    for a, b in zip(chain, chain[1:]):
        diff = [i for i in range(len(a)) if a[i] != b[i]]
        if len(a) != len(b) or len(diff) != 2 or diff[1] != diff[0] + 1:
            return False
        i = diff[0]
        if (a[i], a[i + 1]) != (b[i + 1], b[i]):
            return False
    return True


# -- swap chains -------------------------------------------------------------


@dataclass(frozen=True)
class SwapChain:
    """``steps[t] = (path, j)``: flipping positions j, j+1 of path gives the next path."""

    steps: tuple[tuple[tuple[str, ...], int], ...]
    final: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def paths(self) -> list[tuple[str, ...]]:
        return [p for p, _ in self.steps] + [self.final]

    def as_dict(self) -> dict:
        return {
            "steps": [{"path": list(p), "swap": j} for p, j in self.steps],
            "final": list(self.final),
        }


def flip_at(C: SquareCollection, path: Sequence[str], j: int) -> tuple[str, ...]:
    """Replace positions j, j+1 of ``path`` by their flip."""
    path = tuple(path)
    if not 0 <= j < len(path) - 1:
        raise DomainError(f"no adjacent pair at position {j}")
    y1, y2 = C.flip_pair(path[j], path[j + 1])
    return path[:j] + (y1, y2) + path[j + 2:]


def equivalent(C: SquareCollection, x: ColouredPath | Sequence[str], y: ColouredPath | Sequence[str]) -> bool:
    """x ~ y exactly when they normalise to the same cube."""
    x, y = _as_path(C, x), _as_path(C, y)
    if x.range != y.range:
        return False
    return normalize(C, x) == normalize(C, y)


def witness_chain(C: SquareCollection, x: ColouredPath | Sequence[str], y: ColouredPath | Sequence[str]) -> SwapChain:
    """Flip steps from x to y, read off the common cube along a shuffle of colour words."""
    x, y = _as_path(C, x), _as_path(C, y)
    if x.range != y.range:
        raise DomainError("paths are not equivalent")
    lam = normalize(C, x)
    if normalize(C, y) != lam:
        raise DomainError("paths are not equivalent")
    words = shuffle_chain(x.colours(), y.colours())
    paths = [traversal(lam, w) for w in words]
    steps = []
    for a, b, wa, wb in zip(paths, paths[1:], words, words[1:]):
        j = next(i for i in range(len(wa)) if wa[i] != wb[i])
        steps.append((a, j))
    return SwapChain(tuple(steps), paths[-1])


def replay(C: SquareCollection, x: Sequence[str], chain: SwapChain) -> tuple[str, ...]:
    """Apply the recorded flips to ``x``, checking every intermediate path."""
    current = tuple(x)
    for recorded, j in chain.steps:
        if recorded != current:
            raise DomainError(f"chain expects {recorded}, replay is at {current}")
        current = flip_at(C, current, j)
        validate_path(C.graph, current)
    if current != chain.final:
        raise DomainError("replay does not end at the recorded final path")
    return current


def flip_neighbours(C: SquareCollection, path: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    g = C.graph
    for j in range(len(path) - 1):
        if g.c(path[j]) != g.c(path[j + 1]):
            yield flip_at(C, path, j)


def flip_class(C: SquareCollection, x: Sequence[str], cap: int = 10_000) -> set[tuple[str, ...]]:
    """Everything reachable from ``x`` by adjacent flips (BFS, independent of normalize)."""
    start = tuple(x)
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for q in flip_neighbours(C, p):
            if q not in seen:
                seen.add(q)
                if len(seen) > cap:
                    raise OracleOverflow(f"flip class of {start} exceeds {cap} paths", cap)
                queue.append(q)
    return seen


def flip_reachable(C: SquareCollection, x: Sequence[str], y: Sequence[str], cap: int = 10_000) -> bool:
    """BFS oracle for x ~ y. Raises OracleOverflow rather than guessing."""
    if tuple(x) == tuple(y):
        return True
    if len(x) != len(y):
        return False
    return tuple(y) in flip_class(C, x, cap)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def flip_partition(C: SquareCollection, paths: Sequence[tuple[str, ...]]) -> dict[tuple[str, ...], tuple[str, ...]]:
    """Map each path to a class representative under single flips (union-find).

    ``paths`` must be closed under flips, which holds for all paths of a
    fixed length from a fixed vertex.
    """
    uf = _UnionFind()
    members = set(paths)
    for p in paths:
        uf.find(p)
        for q in flip_neighbours(C, p):
            if q not in members:
                raise PreconditionError(f"path set is not closed under flips: {q}")
            uf.union(p, q)
    return {p: uf.find(p) for p in paths}


def words_with_cubes(
    C: SquareCollection, v: str, max_length: int
) -> Iterator[tuple[tuple[str, ...], CubeMorphism]]:
    """Every path from ``v`` of length <= max_length with its cube, sharing prefix work."""
    g = C.graph

    def walk(prefix: tuple[str, ...], lam: CubeMorphism) -> Iterator[tuple[tuple[str, ...], CubeMorphism]]:
        yield prefix, lam
        if len(prefix) == max_length:
            return
        for f in g.edges_at(lam.s()):
            yield from walk(prefix + (f,), extend(lam, f))

    yield from walk((), identity_at(C, v))


# -- the quotient category ---------------------------------------------------


@dataclass
class QuotientReport:
    passed: bool
    classes: dict[str, int] = field(default_factory=dict)
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.passed


def quotient_structure_check(L: KGraph, length_bound: int = 4) -> QuotientReport:
    """Check that words modulo flips form a category isomorphic to Lambda.

    Classes come from the flip union-find, so normalize is used only on
    the comparison side.  Checks: r, s and shape are class invariants;
    concatenation of classes does not depend on representatives; class
    counts per (v, m) match |v Lambda^m|; and x -> normalize(x) induces a
    bijection between classes and cubes.
    """
    C = L.collection
    g = L.graph
    counts: dict[str, int] = {}

    def fail(**detail) -> QuotientReport:
        return QuotientReport(False, counts, {x: repr(y) for x, y in detail.items()})

    rep: dict[tuple[str, ...] | str, object] = {}
    classes_at: dict[tuple[str, Degree], set] = defaultdict(set)
    cube_of_class: dict[object, CubeMorphism] = {}
    for v in g.vertices:
        by_length: dict[int, list[tuple[tuple[str, ...], CubeMorphism]]] = defaultdict(list)
        for word, lam in words_with_cubes(C, v, length_bound):
            by_length[len(word)].append((word, lam))
        for length, items in by_length.items():
            if length == 0:
                rep[("@", v)] = ("@", v)
                classes_at[v, L.hom(v, (0,) * g.k)[0].degree].add(("@", v))
                cube_of_class[("@", v)] = items[0][1]
                continue
            part = flip_partition(C, [w for w, _ in items])
            for word, lam in items:
                root = part[word]
                rep[word] = root
                path = ColouredPath(g, word)
                root_path = ColouredPath(g, root)
                if (path.range, path.source, path.shape()) != (root_path.range, root_path.source, root_path.shape()):
                    return fail(reason="r, s or shape varies inside a class", word=word, representative=root)
                classes_at[v, path.shape()].add(root)
                if root in cube_of_class:
                    if cube_of_class[root] != lam:
                        return fail(reason="one class, two cubes", word=word, representative=root)
                else:
                    cube_of_class[root] = lam

    # Different classes must give different cubes.
    seen: dict[CubeMorphism, object] = {}
    for root, lam in cube_of_class.items():
        if lam in seen:
            return fail(reason="two classes, one cube", first=seen[lam], second=root)
        seen[lam] = root

    for (v, m), roots in sorted(classes_at.items()):
        expected = len(L.hom(v, m))
        counts[f"{v}:{list(m)}"] = len(roots)
        if len(roots) != expected:
            return fail(reason="class count differs from |v Lambda^m|", vertex=v, degree=m,
                        classes=len(roots), paths=expected)

    # [x][y] = [xy]: every split of every word must land in the same class.
    product: dict[tuple, object] = {}
    for word, root in rep.items():
        if not isinstance(word, tuple) or not word or word[0] == "@":
            continue
        for p in range(1, len(word)):
            key = (rep[word[:p]], rep[word[p:]])
            if product.setdefault(key, root) != root:
                return fail(reason="class product depends on representatives", word=word, split=p)
    return QuotientReport(True, counts)


# -- prefixes of infinite paths ----------------------------------------------


@dataclass(frozen=True)
class PathPrefixFamily:
    """A finite prefix of an intended infinite path, with its coherent cubes."""

    graph: ColouredGraph = field(repr=False)
    edges: tuple[str, ...]
    start: str
    cubes: tuple[CubeMorphism, ...] = field(repr=False, default=())

    def colour_counts(self) -> Degree:
        return abelianize([self.graph.c(e) for e in self.edges], self.graph.k)

    def vertices(self) -> list[str]:
        return [self.start] + [self.graph.s(e) for e in self.edges]

    def extendable_in_every_colour(self) -> bool:
        """The truncation-level stand-in for having infinitely many edges of each colour."""
        end = self.vertices()[-1]
        return all(self.graph.edges_at(end, c) for c in range(1, self.graph.k + 1))

    def degrees(self) -> list[Degree]:
        return [lam.degree for lam in self.cubes]


def extend_pi(C: SquareCollection, x: Sequence[str], vertex: str | None = None) -> PathPrefixFamily:
    """The cubes lambda_{x_1...x_i} for every prefix, checked for coherence."""
    path = validate_path(C.graph, x, vertex)
    start = path.range
    lam = identity_at(C, start)
    cubes = [lam]
    for f in path.edges:
        nxt = extend(lam, f)
        if restrict(nxt, (0,) * len(lam.degree), lam.degree) != lam:
            raise KGraphError(f"prefix cubes are not coherent after {f}")
        cubes.append(nxt)
        lam = nxt
    return PathPrefixFamily(C.graph, path.edges, start, tuple(cubes))


@dataclass
class CylinderReport:
    passed: bool
    checked: dict[str, int] = field(default_factory=dict)
    violation: dict | None = None

    def __bool__(self) -> bool:
        return self.passed


def cylinder_preimage_check(L: KGraph, mu: CubeMorphism, depth: int = 3) -> CylinderReport:
    """Finite-depth check that word cylinders and cube cylinders match up.

    (a) Once a word y from r(mu) has shape >= d(mu), whether lambda_y
    extends mu is fixed for every further extension of y, so the preimage
    of Z(mu) is a union of word cylinders.  (b) For every n with
    |n| <= depth, the cubes of words of shape d(mu)+n extending mu are
    exactly the composites mu nu with nu in s(mu) Lambda^n.
    """
    rf = is_row_finite_no_sources(L)
    if not rf:
        raise PreconditionError(f"needs a row-finite graph with no sources; missing {rf.violations[:4]}")
    C = L.collection
    m = mu.degree
    k = len(m)
    total = sum(m) + depth
    checked = {"words": 0, "extensions": 0, "degrees": 0}
    hits: dict[Degree, set[CubeMorphism]] = defaultdict(set)

    def fail(**detail) -> CylinderReport:
        return CylinderReport(False, checked, {x: repr(y) for x, y in detail.items()})

    def extends_mu(lam: CubeMorphism) -> bool:
        return restrict(lam, (0,) * k, m) == mu

    def walk(word: tuple[str, ...], lam: CubeMorphism, decided: bool | None) -> CylinderReport | None:
        checked["words"] += 1
        if leq(m, lam.degree):
            now = extends_mu(lam)
            if decided is not None and now != decided:
                return fail(reason="cylinder membership changed along an extension", word=word)
            decided = now
            if now:
                hits[lam.degree].add(lam)
        if len(word) == total:
            return None
        for f in L.graph.edges_at(lam.s()):
            checked["extensions"] += 1
            bad = walk(word + (f,), extend(lam, f), decided)
            if bad:
                return bad
        return None

    bad = walk((), identity_at(C, mu.r()), None)
    if bad:
        return bad
    for n_total in range(depth + 1):
        for n in _degrees_of_norm(k, n_total):
            d = tuple(a + b for a, b in zip(m, n))
            expected = {compose(mu, nu) for nu in L.hom(mu.s(), n)}
            checked["degrees"] += 1
            if hits.get(d, set()) != expected:
                return fail(reason="word cylinders miss an extension class", degree=d,
                            found=len(hits.get(d, ())), expected=len(expected))
    return CylinderReport(True, checked)


def _degrees_of_norm(k: int, total: int) -> Iterator[Degree]:
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _degrees_of_norm(k - 1, total - first):
            yield (first, *rest)
