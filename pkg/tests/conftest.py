import random

import pytest

from mmcut.graphs import Graph


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_connected_graph(rng: random.Random, n: int, p: float) -> Graph:
    """G(n, p) conditioned on connectivity; a random spanning tree is added
    when rejection takes too long (keeps the sampler total)."""
    for _ in range(30):
        g = random_graph(rng, n, p)
        if g.is_connected():
            return g
    edges = set(g.edges())
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted(edges))


def oracle_solution_set(graph: Graph, ell: int):
    from mmcut.oracle import enumerate_all_multicuts

    return {cut.cut_edges for cut in enumerate_all_multicuts(graph, ell)}


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
