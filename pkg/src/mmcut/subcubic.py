"""Constructive matching multicuts for subcubic graphs.

Large subcubic graphs always admit a multicut into ell parts; the three
constructions below (pendant-edge matching, subdivided-edge pairs, and
disjoint-cycle boundaries) realize the win-win argument behind the
quasi-linear kernel: either one of them produces a witness, or the instance
is already small and is returned unchanged as the kernel.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .cuts import Multicut, max_parts_of_cut, validate_multicut
from .graphs import Graph

log = logging.getLogger(__name__)

KERNEL_SIZE_FACTOR = 10 ** 6


@dataclass(frozen=True)
class CyclePacking:
    """Vertex-disjoint vertex sets, each inducing a (chordless) cycle."""

    cycles: tuple[tuple[int, ...], ...]

    def check(self, graph: Graph) -> bool:
        seen: set[int] = set()
        for cyc in self.cycles:
            if seen.intersection(cyc):
                return False
            seen.update(cyc)
            inside = set(cyc)
            for v in cyc:
                if sum(1 for u in graph.adj[v] if u in inside) != 2:
                    return False
            sub, _ = graph.induced(cyc)
            if not sub.is_connected():
                return False
        return True


def _require_subcubic(graph: Graph) -> None:
    if graph.max_degree > 3:
        raise ValueError(f"maximum degree {graph.max_degree} exceeds 3")


def multicut_from_degree_one(graph: Graph, ell: int) -> Multicut | None:
    """Greedy matching on pendant edges; applicable when |V1| >= 3*ell.

    Each matched edge isolates its pendant endpoint, and removing pendant
    edges never disconnects the remainder, so the matching is a multicut
    with more parts than matched edges.
    """
    _require_subcubic(graph)
    if not graph.is_connected():
        raise ValueError("construction requires a connected graph")
    pendants = [v for v in range(graph.n) if graph.degree(v) == 1]
    if len(pendants) < 3 * ell:
        return None
    saturated = [False] * graph.n
    matching = []
    for w in pendants:
        u = graph.adj[w][0]
        if not saturated[w] and not saturated[u]:
            saturated[w] = saturated[u] = True
            matching.append((min(w, u), max(w, u)))
    cut = max_parts_of_cut(graph, matching)
    assert cut.p >= ell, "pendant matching fell short of the guaranteed parts"
    return cut


def _subdivided_edges(graph: Graph) -> list[tuple[int, int, int, int]]:
    """All (u', u, v, v') with deg(u) = deg(v) = 2 and four distinct
    vertices, ordered by the middle edge (u, v)."""
    out = []
    for u in range(graph.n):
        if graph.degree(u) != 2:
            continue
        for v in graph.adj[u]:
            if u < v and graph.degree(v) == 2:
                for up in graph.adj[u]:
                    if up == v:
                        continue
                    for vp in graph.adj[v]:
                        if vp == u or vp == up:
                            continue
                        out.append((up, u, v, vp))
    return out


def multicut_from_subdivided_edges(graph: Graph, ell: int) -> Multicut | None:
    """Greedy disjoint subdivided edges (u',u,v,v'), cutting u'u and vv'.

    Applicable when at least 90% of the vertices have degree 2 and
    n >= 21*ell; each selection carves out the two-vertex part {u, v} and
    invalidates at most 7 other candidates.
    """
    _require_subcubic(graph)
    if not graph.is_connected():
        raise ValueError("construction requires a connected graph")
    n = graph.n
    if n < 21 * ell:
        return None
    deg2 = sum(1 for v in range(n) if graph.degree(v) == 2)
    if 10 * deg2 < 9 * n:
        return None
    marked = [False] * n
    matching = []
    selections = 0
    for up, u, v, vp in _subdivided_edges(graph):
        if marked[up] or marked[u] or marked[v] or marked[vp]:
            continue
        marked[up] = marked[u] = marked[v] = marked[vp] = True
        matching.append((min(up, u), max(up, u)))
        matching.append((min(v, vp), max(v, vp)))
        selections += 1
    cut = max_parts_of_cut(graph, matching)
    assert selections >= ell and cut.p >= ell, "subdivided-edge greedy fell short"
    return cut


def _strip_low_degree(adj: list[set[int]], alive: set[int]) -> None:
    queue = [v for v in alive if len(adj[v]) <= 1]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        if len(adj[v]) > 1:
            continue
        alive.discard(v)
        for u in list(adj[v]):
            adj[u].discard(v)
            adj[v].discard(u)
            if u in alive and len(adj[u]) <= 1:
                queue.append(u)


def _shortest_cycle_from(adj, start, cap):
    """Shortest cycle found by BFS from start, as a vertex tuple, or None.

    Only cycles of length <= cap are reported; the BFS stops early once the
    depth makes shorter cycles impossible.
    """
    dist = {start: 0}
    parent = {start: -1}
    frontier = [start]
    best = None
    best_len = cap + 1
    while frontier:
        if 2 * dist[frontier[0]] + 1 > best_len:
            break
        nxt = []
        for a in frontier:
            for b in adj[a]:
                if b == parent[a]:
                    continue
                if b in dist:
                    # Walk both endpoints up to their meeting point.
                    pa, pb = a, b
                    up_a, up_b = [a], [b]
                    while dist[pa] > dist[pb]:
                        pa = parent[pa]
                        up_a.append(pa)
                    while dist[pb] > dist[pa]:
                        pb = parent[pb]
                        up_b.append(pb)
                    while pa != pb:
                        pa, pb = parent[pa], parent[pb]
                        up_a.append(pa)
                        up_b.append(pb)
                    cycle = up_a + up_b[:-1][::-1]
                    if len(cycle) == len(set(cycle)) and len(cycle) < best_len:
                        best_len = len(cycle)
                        best = tuple(cycle)
                else:
                    dist[b] = dist[a] + 1
                    parent[b] = a
                    nxt.append(b)
        frontier = nxt
    return best


def find_disjoint_cycles(graph: Graph) -> CyclePacking:
    """Greedy shortest-cycle-first packing for graphs with 2 <= deg <= 3.

    Repeatedly extracts a globally shortest (hence chordless) cycle, deletes
    it and suppresses the resulting degree <= 1 chains.  The achieved packing
    size relative to |V>=3| / (4 log2 |V>=3|) is logged; the bound is a
    property of the test families, not a universal guarantee of the greedy.
    """
    if graph.min_degree < 2:
        raise ValueError("cycle packing requires minimum degree 2")
    _require_subcubic(graph)
    v3 = sum(1 for v in range(graph.n) if graph.degree(v) >= 3)
    adj = [set(a) for a in graph.adj]
    alive = set(range(graph.n))
    order = list(range(graph.n))
    cycles: list[tuple[int, ...]] = []
    # Deletions never create cycles, so a per-vertex lower bound on the
    # shortest cycle through it is monotone and can be cached across rounds.
    low = [3] * graph.n
    while alive:
        best = None
        best_len = len(alive) + 1
        for v in order:
            if v not in alive or low[v] >= best_len:
                continue
            found = _shortest_cycle_from(adj, v, best_len - 1)
            if found is None:
                low[v] = best_len
                continue
            if len(found) < best_len:
                best, best_len = found, len(found)
                if best_len == 3:
                    break
        if best is None:
            break
        cycles.append(tuple(sorted(best)))
        for v in best:
            alive.discard(v)
            for u in list(adj[v]):
                adj[u].discard(v)
            adj[v].clear()
        _strip_low_degree(adj, alive)
    packing = CyclePacking(tuple(cycles))
    if v3 >= 8:
        bound = v3 / (4 * math.log2(v3))
        log.info(
            "cycle packing: %d cycles, degree->=3 bound %.2f", len(cycles), bound
        )
    return packing


def close_cycle_sets(graph: Graph, packing: CyclePacking) -> list[frozenset[int]]:
    """Absorb every vertex with two neighbors inside a set; afterwards each
    set's boundary is a matching cut.  Closures stay disjoint for
    subcubic graphs."""
    closed = [set(c) for c in packing.cycles]
    # Sets cannot interact below maximum degree 3 (a vertex would need two
    # neighbors in each of two disjoint sets), so each closes independently.
    for cset in closed:
        while True:
            fringe = {u for v in cset for u in graph.adj[v]} - cset
            grow = [
                u for u in fringe
                if sum(1 for w in graph.adj[u] if w in cset) >= 2
            ]
            if not grow:
                break
            cset.update(grow)
    seen: set[int] = set()
    for cset in closed:
        if seen.intersection(cset):
            raise AssertionError("cycle closures overlap; input not subcubic?")
        seen.update(cset)
    return [frozenset(c) for c in closed]


def second_neighborhood(graph: Graph, vertices) -> set[int]:
    """Closed second neighborhood N^2[S] = N[N[S]]."""
    first = set(vertices)
    for v in list(first):
        first.update(graph.adj[v])
    out = set(first)
    for v in list(first):
        out.update(graph.adj[v])
    return out


def multicut_from_cycles(
    graph: Graph, packing: CyclePacking, ell: int
) -> Multicut | None:
    """Select non-conflicting small cycle closures and cut their boundaries.

    Closures are sorted by size; only the first half is eligible.  Each
    selection marks its closed second neighborhood, which keeps the union of
    boundaries a matching.
    """
    _require_subcubic(graph)
    closed = close_cycle_sets(graph, packing)
    order = sorted(closed, key=lambda c: (len(c), min(c) if c else -1))
    half = order[: (len(order) + 1) // 2]
    marked: set[int] = set()
    matching: list[tuple[int, int]] = []
    selections = 0
    for cset in half:
        if marked.intersection(cset):
            continue
        for v in cset:
            for u in graph.adj[v]:
                if u not in cset:
                    matching.append((min(u, v), max(u, v)))
        marked.update(second_neighborhood(graph, cset))
        selections += 1
    if selections < ell:
        return None
    cut = max_parts_of_cut(graph, matching)
    assert cut.p >= ell
    return cut


def strip_degree_one(graph: Graph) -> tuple[Graph, list[int]]:
    """Recursively remove degree-1 vertices; returns (core, old ids).

    Any matching multicut of the core is one of the original graph with the
    same number of parts: the stripped pendant trees hang back onto their
    attachment components.
    """
    adj = [set(a) for a in graph.adj]
    alive = set(range(graph.n))
    _strip_low_degree_only_deg1(adj, alive)
    return graph.induced(sorted(alive))


def _strip_low_degree_only_deg1(adj: list[set[int]], alive: set[int]) -> None:
    queue = [v for v in alive if len(adj[v]) == 1]
    while queue:
        v = queue.pop()
        if v not in alive or len(adj[v]) != 1:
            continue
        alive.discard(v)
        (u,) = adj[v]
        adj[u].discard(v)
        adj[v].clear()
        if u in alive and len(adj[u]) == 1:
            queue.append(u)
    alive.difference_update({v for v in list(alive) if len(adj[v]) == 0})


@dataclass(frozen=True)
class KernelizeResult:
    solved: Multicut | None
    kernel: tuple[Graph, int] | None


def kernelize_subcubic(graph: Graph, ell: int) -> KernelizeResult:
    """Win-win pipeline: construct a witness via the pendant, subdivided-edge
    or cycle constructions, otherwise return the unchanged instance as the
    kernel (asserting it is small relative to ell)."""
    _require_subcubic(graph)
    comps = graph.components()
    if graph.n > 0 and ell <= len(comps):
        cut = max_parts_of_cut(graph, [])
        return KernelizeResult(cut, None)
    for comp in comps:
        sub, ids = graph.induced(comp)
        # Other components contribute one part each.
        target = max(1, ell - (len(comps) - 1))
        cut = _component_construction(sub, target)
        if cut is not None:
            matching = [(ids[u], ids[v]) for u, v in cut.cut_edges]
            lifted = max_parts_of_cut(graph, matching)
            if lifted.p >= ell:
                assert validate_multicut(graph, lifted.part_of, ell) is None
                return KernelizeResult(lifted, None)
    if ell >= 2:
        bound = KERNEL_SIZE_FACTOR * ell * (math.log2(ell) ** 2)
        assert graph.n < bound, "constructions must succeed on large instances"
    return KernelizeResult(None, (graph, ell))


def _component_construction(sub: Graph, target: int) -> Multicut | None:
    cut = multicut_from_degree_one(sub, target)
    if cut is not None:
        return cut
    cut = multicut_from_subdivided_edges(sub, target)
    if cut is not None:
        return cut
    core, core_ids = strip_degree_one(sub)
    if core.n == 0:
        return None
    packing = find_disjoint_cycles(core)
    if not packing.cycles:
        return None
    core_cut = multicut_from_cycles(core, packing, target)
    if core_cut is None:
        return None
    matching = [(core_ids[u], core_ids[v]) for u, v in core_cut.cut_edges]
    lifted = max_parts_of_cut(sub, matching)
    assert lifted.p >= core_cut.p
    return lifted
