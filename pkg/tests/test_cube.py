from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import corpus, mixed_pairing
from kgraph.cube import (
    compose,
    compose_left,
    compose_right,
    edge_morphism,
    enumerate_traversals,
    extend,
    factorise,
    identity_at,
    incompatible_squares,
    morphism_violations,
    normalize,
    prefix_word,
    restrict,
    segment,
    traversal,
    traverses,
    tricolour_fill,
)
from kgraph.category import KGraph
from kgraph.errors import BadIntervalError, DomainError, MissingSquareError, NonAssociativeError
from kgraph.generators import first_non_associative, omega, random_instance, torus
from kgraph.graph import ColouredGraph, add, box, validate_path
from kgraph.squares import SquareCollection, check_associative


def random_path(C, rng, length, start=None):
    g = C.graph
    v = start or rng.choice(g.vertices)
    out = []
    for _ in range(length):
        if not g.edges_at(v):
            break
        e = rng.choice(g.edges_at(v))
        out.append(e)
        v = g.s(e)
    return out


def test_identity_and_edge():
    g, C = torus()
    lam = identity_at(C, "v")
    assert (lam.r(), lam.s(), lam.d()) == ("v", "v", (0, 0))
    assert edge_morphism(C, "f").d() == (1, 0)
    assert edge_morphism(C, "g").d() == (0, 1)


def test_normalize_single_edge():
    g, C = random_instance(2, 3, 2, seed=3)
    for e in g.edges:
        assert normalize(C, [e]) == edge_morphism(C, e)


def test_normalize_unit_cube_is_the_identity_embedding():
    g, C = omega(3, (1, 1, 1))
    lam = normalize(C, ["(0,0,0)+v_1", "(1,0,0)+v_2", "(1,1,0)+v_3"])
    assert lam.d() == (1, 1, 1)
    assert all(lam.vertex(n) == "(" + ",".join(map(str, n)) + ")" for n in box((1, 1, 1)))
    assert lam == tricolour_fill(C, "(0,0,0)+v_1", "(1,0,0)+v_2", "(1,1,0)+v_3")


def test_traversal_counts():
    g, C = omega(3, (2, 1, 1))
    assert len(enumerate_traversals(normalize(C, ["(0,0,0)+v_1", "(1,0,0)+v_2"]))) == 2
    lam = normalize(C, ["(0,0,0)+v_1", "(1,0,0)+v_1", "(2,0,0)+v_2"])
    assert len(enumerate_traversals(lam)) == 3
    cube = normalize(C, ["(0,0,0)+v_1", "(1,0,0)+v_2", "(1,1,0)+v_3"])
    paths = enumerate_traversals(cube)
    assert len(paths) == 6
    assert all(normalize(C, p) == cube and traverses(p, cube) for p in paths)


def test_traverses_rejects_wrong_shape():
    g, C = torus()
    lam = normalize(C, ["f", "g"])
    assert not traverses(validate_path(g, ["f", "f"]), lam)
    assert traverses(validate_path(g, ["g", "f"]), lam)


def test_normalize_reports_missing_square():
    g = ColouredGraph.build(2, ["v"], [("f", "v", "v", 1), ("g", "v", "v", 2)])
    with pytest.raises(MissingSquareError) as info:
        normalize(SquareCollection(g, frozenset()), ["f", "g"])
    assert info.value.path == ("f", "g")


def test_normalize_reports_non_associativity():
    edges = [(f"{c}{n}", "v", "v", i) for i, c in enumerate("fgh", start=1) for n in (1, 2)]
    C = first_non_associative(ColouredGraph.build(3, ["v"], edges))
    triple = check_associative(C).violations[0].triple
    with pytest.raises(NonAssociativeError):
        normalize(C, triple)
    with pytest.raises(NonAssociativeError):
        tricolour_fill(C, *triple)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 24), st.integers(0, 10**6), st.integers(0, 7))
def test_normalized_cubes_are_compatible_morphisms(which, seed, length):
    g, C = random_instance(2, 1 + which % 3, 2, seed=which)
    rng = random.Random(seed)
    start = rng.choice(g.vertices)
    lam = normalize(C, random_path(C, rng, length, start), start)
    assert morphism_violations(lam) == []
    assert incompatible_squares(lam) == []
    assert normalize(C, traversal(lam), lam.r()) == lam


def _sample_cube(rng, C, length):
    start = rng.choice(C.graph.vertices)
    return normalize(C, random_path(C, rng, length, start), start)


def test_restrict_examples():
    rng = random.Random(1)
    for name, (g, C) in corpus()[:12]:
        lam = _sample_cube(rng, C, 5)
        d = lam.d()
        assert restrict(lam, (0,) * g.k, d) == lam
        assert restrict(lam, d, d) == identity_at(C, lam.s())
        for p in box(d):
            for q in box(d, p):
                inner = restrict(lam, p, q)
                for a in box(inner.d()):
                    for b in box(inner.d(), a):
                        assert restrict(inner, a, b) == restrict(lam, add(p, a), add(p, b))
        assert segment(lam, (0,) * g.k, d) == lam


def test_restrict_rejects_bad_intervals():
    g, C = torus()
    lam = normalize(C, ["f", "g"])
    with pytest.raises(BadIntervalError):
        restrict(lam, (1, 0), (0, 1))
    with pytest.raises(BadIntervalError):
        restrict(lam, (0, 0), (2, 0))
    with pytest.raises(BadIntervalError):
        factorise(lam, (0, 2))


def test_compose_laws_on_random_triples():
    rng = random.Random(2)
    for name, (g, C) in corpus():
        for _ in range(15):
            x = random_path(C, rng, rng.randint(0, 6))
            if not x:
                continue
            cut1, cut2 = sorted(rng.randint(0, len(x)) for _ in range(2))
            a, b, c = x[:cut1], x[cut1:cut2], x[cut2:]
            lam = normalize(C, a, g.r(x[0]))
            mu = normalize(C, b, g.r(x[cut1]) if cut1 < len(x) else g.s(x[-1]))
            nu = normalize(C, c, g.r(x[cut2]) if cut2 < len(x) else g.s(x[-1]))
            assert compose(lam, compose(mu, nu)) == compose(compose(lam, mu), nu) == normalize(C, x)
            assert compose(identity_at(C, lam.r()), lam) == lam == compose(lam, identity_at(C, lam.s()))
            assert restrict(compose(mu, nu), (0,) * g.k, mu.d()) == mu
            assert compose_left(mu, nu) == compose_right(mu, nu)


def test_compose_rejects_mismatch():
    g, C = omega(2, (1, 1))
    with pytest.raises(DomainError):
        compose(edge_morphism(C, "(0,0)+v_1"), edge_morphism(C, "(0,0)+v_2"))


def test_extend_matches_normalize():
    rng = random.Random(4)
    g, C = mixed_pairing()
    x = random_path(C, rng, 6)
    lam = normalize(C, x[:3])
    for e in x[3:]:
        lam = extend(lam, e)
    assert lam == normalize(C, x)


def test_prefix_word_reads_the_composite():
    rng = random.Random(5)
    g, C = mixed_pairing()
    for _ in range(30):
        alpha = normalize(C, random_path(C, rng, rng.randint(0, 3)), "v")
        lam = normalize(C, random_path(C, rng, rng.randint(0, 4)), "v")
        composite = compose(alpha, lam)
        for length in box(composite.d()):
            assert prefix_word(alpha, lam, length) == traversal(restrict(composite, (0, 0), length))


def test_factorise_examples_and_uniqueness():
    g, C = random_instance(2, 2, 2, seed=11)
    L = KGraph(C)
    rng = random.Random(0)
    for _ in range(10):
        lam = _sample_cube(rng, C, 4)
        d = lam.d()
        zero = (0,) * g.k
        assert factorise(lam, zero) == (identity_at(C, lam.r()), lam)
        assert factorise(lam, d) == (lam, identity_at(C, lam.s()))
        for m in box(d):
            mu, nu = factorise(lam, m)
            assert compose(mu, nu) == lam
            rest = tuple(a - b for a, b in zip(d, m))
            pairs = [
                (a, b)
                for a in L.hom(lam.r(), m)
                for b in L.hom(a.s(), rest)
                if compose(a, b) == lam
            ]
            assert pairs == [(mu, nu)]
