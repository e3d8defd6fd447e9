"""Modulator approximations: vertex cover, cluster and co-cluster deletion.

All three are the folklore greedy approximations (factor 2 resp. 3); the
enumeration kernels only need some valid modulator, not an optimal one.
Every scan runs in ascending vertex order so results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph


@dataclass(frozen=True)
class Modulator:
    kind: str  # vertex-cover | cluster | co-cluster
    vertices: frozenset[int]

    def check(self, graph: Graph) -> bool:
        """True iff removing ``vertices`` leaves the claimed class."""
        rest = [v for v in range(graph.n) if v not in self.vertices]
        sub, _ = graph.induced(rest)
        if self.kind == "vertex-cover":
            return sub.m == 0
        if self.kind == "cluster":
            return is_cluster_graph(sub)
        if self.kind == "co-cluster":
            return is_cocluster_graph(sub)
        raise ValueError(f"unknown modulator kind {self.kind!r}")


def is_cluster_graph(graph: Graph) -> bool:
    """True iff every connected component is a clique (no induced P3)."""
    for comp in graph.components():
        k = len(comp)
        inside = set(comp)
        edges = sum(1 for v in comp for u in graph.adj[v] if u in inside) // 2
        if edges != k * (k - 1) // 2:
            return False
    return True


def cocluster_classes(graph: Graph) -> list[list[int]] | None:
    """Independence classes of a complete multipartite graph, or None.

    Two vertices share a class iff they are non-adjacent; for a co-cluster
    graph that relation is an equivalence.  Classes come out sorted by their
    smallest vertex.
    """
    n = graph.n
    if n == 0:
        return []
    class_of = [-1] * n
    classes: list[list[int]] = []
    for v in range(n):
        if class_of[v] != -1:
            continue
        members = [v]
        class_of[v] = len(classes)
        nv = set(graph.adj[v])
        for u in range(v + 1, n):
            if class_of[u] == -1 and u not in nv:
                class_of[u] = len(classes)
                members.append(u)
        classes.append(members)
    # Verify: no edges within a class, all edges across classes present.
    sizes = [len(c) for c in classes]
    expected = (n * (n - 1) // 2) - sum(s * (s - 1) // 2 for s in sizes)
    if graph.m != expected:
        return None
    for u in range(n):
        cu = class_of[u]
        for w in graph.adj[u]:
            if class_of[w] == cu:
                return None
    return classes


def is_cocluster_graph(graph: Graph) -> bool:
    return cocluster_classes(graph) is not None


def approx_vertex_cover(graph: Graph) -> Modulator:
    """End-vertices of the lexicographically greedy maximal matching."""
    saturated = [False] * graph.n
    cover: list[int] = []
    for u in range(graph.n):
        if saturated[u]:
            continue
        for v in graph.adj[u]:
            if not saturated[v] and u < v:
                saturated[u] = saturated[v] = True
                cover.extend((u, v))
                break
    return Modulator("vertex-cover", frozenset(cover))


def _first_induced_p3(graph: Graph, alive: set[int]) -> tuple[int, int, int] | None:
    # Scan centers ascending, then neighbor pairs ascending.
    for b in sorted(alive):
        nbrs = [u for u in graph.adj[b] if u in alive]
        for i, a in enumerate(nbrs):
            aset = graph.adj[a]
            for c in nbrs[i + 1:]:
                if c not in aset:
                    return (a, b, c)
    return None


def approx_cluster_modulator(graph: Graph) -> Modulator:
    """Hit a maximal set of vertex-disjoint induced P3s; |U| <= 3 dc(G)."""
    alive = set(range(graph.n))
    taken: list[int] = []
    while True:
        p3 = _first_induced_p3(graph, alive)
        if p3 is None:
            break
        taken.extend(p3)
        alive.difference_update(p3)
    return Modulator("cluster", frozenset(taken))


def _first_induced_co_p3(graph: Graph, alive: set[int]) -> tuple[int, int, int] | None:
    # A P3 of the complement is an edge (a, c) plus b non-adjacent to both;
    # triples are tested directly instead of materializing the complement.
    for b in sorted(alive):
        nb = set(graph.adj[b])
        candidates = sorted(v for v in alive if v != b and v not in nb)
        cand_set = set(candidates)
        for a in candidates:
            for c in graph.adj[a]:
                if c > a and c in cand_set:
                    return (a, b, c)
    return None


def approx_cocluster_modulator(graph: Graph) -> Modulator:
    """Hit a maximal set of disjoint complement-P3s; |S| <= 3 dcc(G)."""
    alive = set(range(graph.n))
    taken: list[int] = []
    while True:
        co = _first_induced_co_p3(graph, alive)
        if co is None:
            break
        taken.extend(co)
        alive.difference_update(co)
    return Modulator("co-cluster", frozenset(taken))
