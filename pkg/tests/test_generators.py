from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgraph.category import KGraph
from kgraph.errors import DomainError
from kgraph.generators import (
    BasicData,
    bouquet,
    bouquet_2graph,
    cycle,
    disjoint_union,
    free_bouquets,
    omega,
    basic_data_2graph,
    basic_data_bijectivity,
    window_functions,
    product_of_1graphs,
    random_instance,
    torus,
)
from kgraph.graph import box, sub
from kgraph.io import Instance, to_dict
from kgraph.squares import check_associative, check_complete


def test_omega_counts():
    g, C = omega(2, (1, 1))
    assert (len(g.vertices), len(g.edges), len(C.squares)) == (4, 4, 1)
    g, C = omega(1, (3,))
    assert (len(g.vertices), len(g.edges), len(C.squares)) == (4, 3, 0)
    g, C = omega(3, (1, 1, 1))
    # one square per face of the unit cube
    assert (len(g.edges), len(C.squares)) == (12, 6)
    assert check_associative(C)


def test_omega_has_one_path_per_admissible_degree():
    g, C = omega(2, (2, 1))
    L = KGraph(C)
    for p in box((2, 1)):
        v = "(" + ",".join(map(str, p)) + ")"
        for n in box((3, 2)):
            expected = 1 if all(a <= b for a, b in zip(n, sub((2, 1), p))) else 0
            assert len(L.hom(v, n)) == expected


def test_product_of_single_loops_is_the_torus():
    g, C = product_of_1graphs([bouquet(1), bouquet(1, prefix="g")])
    assert (len(g.vertices), len(g.edges), len(C.squares)) == (1, 2, 1)


def test_loop_times_three_cycle():
    g, C = product_of_1graphs([bouquet(1), cycle(3)])
    assert (len(g.vertices), len(g.edges), len(C.squares)) == (3, 6, 3)
    assert check_complete(C)


def _count_paths(g, v, n):
    return sum(1 for _ in g.paths(n, v))


def test_product_path_counts_are_products():
    factors = [cycle(2), bouquet(2)]
    g, C = product_of_1graphs(factors)
    L = KGraph(C)
    for (a, b) in itertools.product(factors[0].vertices, factors[1].vertices):
        v = f"({a},{b})"
        for m in box((2, 3)):
            assert len(L.hom(v, m)) == _count_paths(factors[0], a, m[0]) * _count_paths(factors[1], b, m[1])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_random_k2_instances_are_complete(seed, n, max_in):
    g, C = random_instance(2, n, max_in, seed=seed)
    assert check_complete(C)
    assert all(g.edges_at(v, c) for v in g.vertices for c in (1, 2))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_random_k3_instances_are_associative(seed):
    g, C = random_instance(3, 2, 2, seed=seed)
    assert check_complete(C) and check_associative(C)


def test_random_instances_are_reproducible():
    first = to_dict(Instance.of(random_instance(2, 3, 2, seed=42)))
    second = to_dict(Instance.of(random_instance(2, 3, 2, seed=42)))
    assert first == second
    with pytest.raises(DomainError):
        random_instance(4)


def test_twisted_pairing_needs_square_bouquet():
    with pytest.raises(DomainError):
        free_bouquets(2, 3, twisted=True)
    g, C = free_bouquets(2, 2, twisted=True)
    assert check_complete(C)


def test_bouquet_pairing_must_be_a_bijection():
    with pytest.raises(DomainError):
        bouquet_2graph(2, 2, {(1, 1): (1, 1), (1, 2): (1, 1), (2, 1): (2, 1), (2, 2): (2, 2)})


def test_disjoint_union_tags_ids():
    g, C = disjoint_union(torus(), torus())
    assert g.vertices == ("A.v", "B.v")
    assert len(C.squares) == 2


def basic(q=2, t=0):
    return BasicData(frozenset({(0, 0), (1, 0), (0, 1)}), q, t, {(0, 0): 1, (1, 0): 1, (0, 1): 1})


def test_basic_data_vertex_count():
    g, C = basic_data_2graph(basic())
    # functions T -> Z/2 with zero sum: by brute force over all 8
    expected = sum(1 for v in itertools.product(range(2), repeat=3) if sum(v) % 2 == 0)
    assert len(g.vertices) == expected == 4
    assert check_complete(C)


def test_basic_data_degenerate_modulus():
    g, C = basic_data_2graph(basic(q=1))
    assert (len(g.vertices), len(g.edges), len(C.squares)) == (1, 2, 1)
    assert basic_data_bijectivity(basic(q=1))


def test_basic_data_functions_satisfy_every_window():
    data = basic(q=3, t=1)
    for lam in window_functions(data, (1, 1)):
        for n in box((1, 1)):
            assert sum(lam[a + n[0], b + n[1]] for a, b in data.T) % 3 == 1


def test_basic_data_bijectivity():
    report = basic_data_bijectivity(basic(), (2, 2))
    assert report, report.violation
    assert report.counts["[2, 2]"] == 64


@pytest.mark.parametrize(
    "T, w",
    [
        ({(1, 1), (0, 0)}, None),
        ({(0, 0), (1, 0)}, None),
        ({(0, 0), (1, 0), (0, 1)}, {(0, 0): 1, (1, 0): 2, (0, 1): 1}),
    ],
)
def test_bad_basic_data(T, w):
    w = w or {p: 1 for p in T}
    with pytest.raises(DomainError):
        BasicData(frozenset(T), 2, 0, w)
