"""Shared test instances: the acceptance corpus and a few named examples."""

from __future__ import annotations

from functools import lru_cache

from kgraph import generators as G

RANDOM_K2_SEEDS = range(25)
RANDOM_K3_SEEDS = range(5)


def loop_times_cycle():
    return G.product_of_1graphs([G.bouquet(1, "f"), G.cycle(3)])


def golden_mean():
    """The 1-graph a <- a, a <- b, b <- a."""
    return G.one_graph(["a", "b"], [("x", "a", "a"), ("y", "a", "b"), ("z", "b", "a")])


def mixed_pairing():
    """A single-vertex 2-graph whose pairing is neither the product nor the twist."""
    return G.bouquet_2graph(2, 2, {(1, 1): (1, 1), (1, 2): (1, 2), (2, 1): (2, 2), (2, 2): (2, 1)})


@lru_cache(maxsize=None)
def corpus() -> tuple[tuple[str, tuple], ...]:
    items = [
        ("torus", G.torus()),
        ("omega-2-(2,2)", G.omega(2, (2, 2))),
        ("omega-3-(1,1,1)", G.omega(3, (1, 1, 1))),
        ("loop-x-3cycle", loop_times_cycle()),
    ]
    for seed in RANDOM_K2_SEEDS:
        items.append((f"random-k2-{seed}", G.random_instance(2, 1 + seed % 3, 2, seed=seed)))
    for seed in RANDOM_K3_SEEDS:
        items.append((f"random-k3-{seed}", G.random_instance(3, 2, 2, seed=seed)))
    return tuple(items)


def aperiodic_set() -> list[tuple[str, tuple]]:
    return [
        ("free-2x2", G.free_bouquets(2, 2)),
        ("mixed-2x2", mixed_pairing()),
        ("free-2x3", G.free_bouquets(2, 3)),
        ("golden-x-bouquet2", G.product_of_1graphs([golden_mean(), G.bouquet(2, "g")])),
        ("bouquet2-cubed", G.product_of_1graphs([G.bouquet(2, "f"), G.bouquet(2, "g"), G.bouquet(2, "h")])),
    ]


def disjoint_free():
    return G.disjoint_union(G.free_bouquets(2, 2), G.free_bouquets(2, 2))
