from __future__ import annotations

import pytest
from corpus import aperiodic_set, corpus, disjoint_free, mixed_pairing

from kgraph.category import KGraph, is_row_finite_no_sources, paths_upto
from kgraph.cube import identity_at
from kgraph.dynamics import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    CofinalityCertificate,
    PeriodicityWitness,
    avoiding_core,
    check_aperiodic,
    check_cofinal,
    noncofinal_ray,
    reachable,
    separating_path,
    separation_failures,
    simplicity_verdict,
)
from kgraph.errors import DomainError, InconclusiveError, PreconditionError
from kgraph.generators import (
    cycle,
    disjoint_union,
    free_bouquets,
    nonrowfinite_example,
    torus,
)
from kgraph.graph import ColouredGraph
from kgraph.squares import SquareCollection


def one_graph_instance(g):
    return g, SquareCollection(g, frozenset())


def test_torus_is_periodic():
    L = KGraph(torus()[1])
    verdict = check_aperiodic(L, (1, 1), (3, 3))
    assert verdict.status == FAILS
    w = verdict.witness
    assert isinstance(w, PeriodicityWitness) and w.reverify(L)


def test_three_cycle_is_periodic_with_period_three():
    L = KGraph(one_graph_instance(cycle(3))[1])
    verdict = check_aperiodic(L, (4,), (8,), exhaustive=True)
    assert verdict.status == FAILS
    found = {(tuple(w["m"]), tuple(w["n"])) for w in verdict.detail["all_witnesses"] if w["v"] == "v0"}
    assert ((1,), (4,)) in found
    assert all((n[0] - m[0]) % 3 == 0 for m, n in found)
    assert PeriodicityWitness("v0", (1,), (4,), (8,)).reverify(L)
    assert not PeriodicityWitness("v0", (1,), (3,), (8,)).reverify(L)


def test_free_instance_is_aperiodic_up_to_bounds():
    L = KGraph(free_bouquets(2, 2)[1])
    verdict = check_aperiodic(L, (2, 2), (4, 4))
    assert verdict.status == HOLDS
    assert verdict.detail["separated"] == 36  # unordered pairs of the 9 degrees <= (2,2)


def test_tight_bounds_give_a_bounded_witness_only():
    # With no room beyond the join, nothing separates (0,0) from (0,2); a
    # longer red word does, so the witness is valid only up to its bound.
    L = KGraph(free_bouquets(2, 2)[1])
    verdict = check_aperiodic(L, (2, 2), (2, 2))
    assert verdict.status == FAILS
    w = verdict.witness
    assert w.reverify(L)
    assert not PeriodicityWitness(w.v, w.m, w.n, (4, 4)).reverify(L)


def test_untested_pairs_make_the_verdict_inconclusive():
    L = KGraph(free_bouquets(2, 2)[1])
    verdict = check_aperiodic(L, (1, 1), (3, 0))
    assert verdict.status == INCONCLUSIVE
    assert verdict.detail["separated"] == 1
    assert {tuple(p["n"]) for p in verdict.detail["untested"]} >= {(0, 1), (1, 1)}


def test_aperiodicity_needs_no_sources():
    with pytest.raises(PreconditionError):
        check_aperiodic(KGraph(nonrowfinite_example(2)[1]), (1, 1), (2, 2))


def test_separating_path_for_zero_is_trivial():
    g, C = free_bouquets(2, 2)
    L = KGraph(C)
    assert separating_path(L, "v", (0, 0), (2, 2)) == identity_at(C, "v")


@pytest.mark.parametrize("name, pair", aperiodic_set()[:3], ids=[n for n, _ in aperiodic_set()[:3]])
def test_separating_path_is_verified(name, pair):
    L = KGraph(pair[1])
    for v in L.vertices:
        lam = separating_path(L, v, (1, 1), (4, 4))
        assert lam.r() == v and lam.degree >= (1, 1)
        assert separation_failures(L, v, lam, (1, 1)) == []


def test_separating_path_on_the_torus_gives_up():
    L = KGraph(torus()[1])
    with pytest.raises(InconclusiveError) as info:
        separating_path(L, "v", (1, 1), (4, 4))
    assert info.value.detail["v"] == "v"


def test_a_bad_candidate_is_caught_by_the_brute_force_check():
    g, C = mixed_pairing()
    L = KGraph(C)
    # The identity never separates two distinct edges.
    assert separation_failures(L, "v", identity_at(C, "v"), (1, 0))


def test_reachability_matches_bounded_paths():
    for name, (g, C) in corpus():
        if g.k != 2:
            continue
        L = KGraph(C)
        bound = len(g.vertices) * g.k
        for v in g.vertices:
            oracle = {lam.s() for lam in paths_upto(L, bound, v)}
            assert reachable(L, v) == oracle


def test_cofinality_examples():
    assert check_cofinal(KGraph(torus()[1]), (2, 2)).status == HOLDS
    L = KGraph(one_graph_instance(cycle(4))[1])
    assert check_cofinal(L, (4,)).status == HOLDS
    tori = KGraph(disjoint_union(torus(), torus())[1])
    verdict = check_cofinal(tori, (2, 2))
    assert verdict.status == FAILS
    cert = verdict.witness
    assert isinstance(cert, CofinalityCertificate) and cert.reverify(tori)
    assert cert.w not in reachable(tori, cert.v)


def test_tampered_certificate_is_rejected():
    L = KGraph(disjoint_union(torus(), torus())[1])
    cert = check_cofinal(L, (2, 2)).witness
    forged = CofinalityCertificate(cert.v, cert.v, cert.reachable_from_v, cert.core | {cert.v})
    assert not forged.reverify(L)


def test_avoiding_core_drops_vertices_that_drain_back():
    # v1 has a loop but also an edge from v0's side: from v1 one can stay at
    # v1 forever, so v1 is in the core avoiding R(v0) = {v0}.
    g = ColouredGraph.build(1, ["v0", "v1", "v2"], [
        ("a", "v0", "v0", 1), ("b", "v1", "v1", 1), ("c", "v2", "v0", 1),
    ])
    L = KGraph(SquareCollection(g, frozenset()))
    assert reachable(L, "v0") == {"v0"}
    assert avoiding_core(L, reachable(L, "v0")) == {"v1"}
    assert reachable(L, "v2") == {"v0", "v2"}
    verdict = check_cofinal(L, (3,))
    assert verdict.status == FAILS and verdict.witness.w == "v1"


def test_noncofinal_rays():
    L = KGraph(disjoint_union(torus(), torus())[1])
    ray = noncofinal_ray(L, "A.v", "B.v", 3)
    assert all(u.startswith("B.") for u in ray.vertices())
    assert noncofinal_ray(L, "A.v", "B.v", 0).vertices() == ["B.v"]
    with pytest.raises(DomainError):
        noncofinal_ray(L, "A.v", "A.v", 2)

    cycles = disjoint_union(one_graph_instance(cycle(3)), one_graph_instance(cycle(3)))
    Lc = KGraph(cycles[1])
    ray = noncofinal_ray(Lc, "A.v0", "B.v1", 3)
    visited = ray.vertices()
    assert len(visited) == 4
    assert not set(visited) & reachable(Lc, "A.v0")


def test_simplicity_verdicts():
    torus_verdict = simplicity_verdict(KGraph(torus()[1]), (2, 2), (4, 4), (4, 4))
    assert torus_verdict.status == FAILS
    assert torus_verdict.witness["aperiodic"]["status"] == FAILS

    split = simplicity_verdict(KGraph(disjoint_free()[1]), (2, 2), (4, 4), (4, 4))
    assert split.status == FAILS
    assert split.witness["cofinal"]["status"] == FAILS
    assert split.witness["aperiodic"]["status"] == HOLDS

    free = simplicity_verdict(KGraph(free_bouquets(2, 2)[1]), (2, 2), (4, 4), (4, 4))
    assert free.status == HOLDS and free.as_dict()["detail"]["simple"]


def test_corpus_members_have_no_sources():
    for name, (g, C) in aperiodic_set():
        assert is_row_finite_no_sources(KGraph(C))
