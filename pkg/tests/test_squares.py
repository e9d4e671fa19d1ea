from __future__ import annotations

import pytest

from kgraph.errors import DomainError, MalformedCollectionError, MissingSquareError, PreconditionError
from kgraph.generators import all_complete_collections, first_non_associative, omega, random_instance, torus
from kgraph.graph import ColouredGraph, validate_path
from kgraph.squares import (
    Square,
    SquareCollection,
    check_associative,
    check_complete,
    cube_routes,
    flip,
    make_square,
    tricoloured_paths,
)


def unit_square():
    return omega(2, (1, 1))


def test_unit_square_is_complete():
    g, C = unit_square()
    assert len(C.squares) == 1
    assert check_complete(C).complete


def test_empty_collection_has_one_violation_per_colour_order():
    g, _ = unit_square()
    report = check_complete(SquareCollection(g, frozenset()))
    assert not report.complete
    assert sorted(p for p, n in report.violations) == [
        ("(0,0)+v_1", "(1,0)+v_2"),
        ("(0,0)+v_2", "(0,1)+v_1"),
    ]


def test_partial_pairing_leaves_an_unowned_path():
    g = ColouredGraph.build(2, ["v"], [("f1", "v", "v", 1), ("f2", "v", "v", 1), ("g", "v", "v", 2)])
    C = SquareCollection.from_faces(g, [(("f1", "g"), ("g", "f1"))])
    report = check_complete(C)
    unowned = {p for p, n in report.violations if n == 0}
    assert ("f2", "g") in unowned


def test_square_with_missing_edge_is_rejected():
    g, _ = unit_square()
    with pytest.raises(MalformedCollectionError):
        SquareCollection(g, frozenset({Square(1, 2, "nope", "(1,0)+v_2", "(0,0)+v_2", "(0,1)+v_1")}))


def test_make_square_rejects_mismatched_faces():
    g, _ = torus()
    with pytest.raises(MalformedCollectionError):
        make_square(g, ("f", "g"), ("f", "g"))


def test_flip_in_the_unit_square():
    g, C = unit_square()
    x = validate_path(g, ["(0,0)+v_1", "(1,0)+v_2"])
    assert flip(C, x).edges == ("(0,0)+v_2", "(0,1)+v_1")
    assert flip(C, flip(C, x)) == x


def test_flip_needs_mixed_colours():
    g, C = omega(2, (2, 0))
    with pytest.raises(DomainError):
        flip(C, validate_path(g, ["(0,0)+v_1", "(1,0)+v_1"]))


def test_flip_pair_on_unowned_path():
    g = ColouredGraph.build(2, ["v"], [("f", "v", "v", 1), ("g", "v", "v", 2)])
    C = SquareCollection(g, frozenset())
    with pytest.raises(MissingSquareError):
        C.flip_pair("f", "g")


def test_two_colours_are_vacuously_associative():
    g, C = random_instance(2, 3, 2, seed=5)
    assert list(tricoloured_paths(C)) == []
    assert check_associative(C).associative


def test_unit_cube_is_associative():
    g, C = omega(3, (1, 1, 1))
    assert len(C.squares) == 6
    assert check_associative(C, exhaustive=True).associative


def test_incomplete_collection_is_a_precondition_failure():
    g, _ = unit_square()
    with pytest.raises(PreconditionError):
        check_associative(SquareCollection(g, frozenset()))


def _two_loops_three_colours():
    edges = [(f"{c}{n}", "v", "v", i) for i, c in enumerate("fgh", start=1) for n in (1, 2)]
    return ColouredGraph.build(3, ["v"], edges)


def test_brute_force_finds_a_non_associative_collection():
    C = first_non_associative(_two_loops_three_colours())
    assert C is not None and check_complete(C)
    report = check_associative(C)
    assert not report.associative
    f, g, h = report.violations[0].triple
    first, second = cube_routes(C, f, g, h)
    assert first != second


def test_brute_force_collections_are_complete():
    g = ColouredGraph.build(2, ["v"], [("f1", "v", "v", 1), ("f2", "v", "v", 1), ("g", "v", "v", 2)])
    collections = list(all_complete_collections(g))
    # two blue-red paths and two red-blue paths: 2! bijections
    assert len(collections) == 2
    assert all(check_complete(C) for C in collections)
