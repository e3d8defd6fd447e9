"""Polynomial-delay enumeration kernels: vertex cover and distance to
co-cluster.

The vertex-cover compressor keeps the cover, one pendant neighbor per cover
vertex and up to three shared independent-set neighbors per cover pair; the
lifting streams, for every kernel solution, the whole equivalence class
obtained by swapping which pendant edge of a group is cut.  The co-cluster
compressor shrinks the complete multipartite remainder to a constant-size
indivisible core whose solutions coincide with the original graph's, or
falls back to the vertex-cover kernel when the remainder is too thin to be
indivisible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .cuts import Edge, Multicut, max_parts_of_cut
from .graphs import Graph
from .modulators import Modulator, cocluster_classes
from .oracle import enumerate_all_multicuts

VC_PAIR_MARKS = 3


@dataclass(frozen=True)
class VcKernel:
    graph: Graph  # H, on its own contiguous ids
    to_g: tuple[int, ...]  # H id -> original id
    cover: frozenset[int]  # X, original ids
    marked: frozenset[int]  # Z, original ids
    pendant_groups: dict[int, tuple[Edge, ...]]  # x -> L_x (original ids)
    retained: dict[int, Edge]  # x -> l_x, the group's edge kept in H


def compress_vc(graph: Graph, cover: Modulator | frozenset[int]) -> VcKernel:
    """Marking compressor for the vertex-cover parameterization.

    Step (i) keeps one degree-1 neighbor per cover vertex, step (ii) keeps
    min(3, #common) shared higher-degree neighbors per cover pair; both pick
    smallest ids.  Requires a graph without isolated vertices.
    """
    x_set = set(cover.vertices if isinstance(cover, Modulator) else cover)
    for v in range(graph.n):
        if graph.degree(v) == 0:
            raise ValueError("strip isolated vertices before compressing")
        if v not in x_set:
            for u in graph.adj[v]:
                if u not in x_set:
                    raise ValueError(f"edge ({v}, {u}) is not covered")
    marked: set[int] = set()
    pendant_groups: dict[int, tuple[Edge, ...]] = {}
    retained: dict[int, Edge] = {}
    xs = sorted(x_set)
    for x in xs:
        ones = [y for y in graph.adj[x] if y not in x_set and graph.degree(y) == 1]
        if ones:
            z = min(ones)
            marked.add(z)
            pendant_groups[x] = tuple((min(x, y), max(x, y)) for y in sorted(ones))
            retained[x] = (min(x, z), max(x, z))
    for x, y in itertools.combinations(xs, 2):
        common = [
            z for z in graph.adj[x]
            if z not in x_set and graph.degree(z) >= 2 and z in graph.adj[y]
        ]
        for z in sorted(common)[:VC_PAIR_MARKS]:
            marked.add(z)
    keep = sorted(x_set | marked)
    hgraph, to_g = graph.induced(keep)
    kern = VcKernel(
        hgraph, tuple(to_g), frozenset(x_set), frozenset(marked),
        pendant_groups, retained,
    )
    k = len(x_set)
    assert hgraph.n <= 2 * k + 3 * (k * (k - 1) // 2), "kernel size bound violated"
    return kern


def _h_solution_edge_sets(hgraph: Graph) -> Iterator[frozenset[Edge]]:
    if hgraph.n == 0:
        yield frozenset()
        return
    for cut in enumerate_all_multicuts(hgraph, 1, limit=hgraph.n):
        yield cut.cut_edges


def lift_vc(
    graph: Graph, kern: VcKernel, kernel_cut: frozenset[Edge]
) -> Iterator[Multicut]:
    """Stream the equivalence class of one kernel solution in the original
    graph: every way of re-choosing the cut pendant edge per group, in
    odometer order.  Emitted cuts are validated and canonicalized."""
    base: set[Edge] = set()
    groups: list[tuple[Edge, ...]] = []
    # Translate kernel edges to original ids first.
    translated = {
        (min(kern.to_g[u], kern.to_g[v]), max(kern.to_g[u], kern.to_g[v]))
        for u, v in kernel_cut
    }
    retained_edges = {edge: x for x, edge in kern.retained.items()}
    for edge in sorted(translated):
        x = retained_edges.get(edge)
        if x is not None:
            groups.append(kern.pendant_groups[x])
        else:
            base.add(edge)
    expected_parts = None
    for combo in itertools.product(*groups):
        cut_edges = base.union(combo)
        cut = max_parts_of_cut(graph, cut_edges)
        assert cut.cut_edges == frozenset(cut_edges), "lifted cut must be exact"
        if expected_parts is None:
            expected_parts = cut.p
        assert cut.p == expected_parts, "pendant swaps preserve part counts"
        yield cut


@dataclass(frozen=True)
class CoclusterReduced:
    """Shrunk instance whose matching multicuts coincide with the original
    graph's, edge for edge (via the id translation)."""

    graph: Graph  # H on contiguous ids
    to_g: tuple[int, ...]  # H id -> original id; padding vertices map to -1
    ell: int


@dataclass(frozen=True)
class CoclusterDelegate:
    cover: frozenset[int]  # vertex cover of the original graph


def _blob_compaction(
    s_vertices: list[int],
    forced: list[int],
    attach_edges: list[Edge],
    s_edges: list[Edge],
    blob_nonempty: bool,
) -> tuple[Graph, tuple[int, ...]]:
    """Replace the indivisible remainder by a small clique.

    Keeps the cover-side vertices and every attachment endpoint verbatim;
    vertices that were forced into the remainder's part get two edges into
    the clique, which pins them there in every solution.
    """
    cut_points = sorted({z for _u, z in attach_edges})
    old_ids = sorted(set(s_vertices) | set(cut_points))
    index = {v: i for i, v in enumerate(old_ids)}
    pad_needed = max(0, (3 if (blob_nonempty or cut_points) else 0) - len(cut_points))
    blob_ids = [index[z] for z in cut_points]
    n = len(old_ids)
    for _ in range(pad_needed):
        blob_ids.append(n)
        n += 1
    edges: list[Edge] = []
    for u, v in s_edges:
        edges.append((index[u], index[v]))
    for u, z in attach_edges:
        edges.append((index[u], index[z]))
    for i, a in enumerate(blob_ids):
        for b in blob_ids[i + 1:]:
            edges.append((a, b))
    anchor = sorted(blob_ids)[:2]
    for u in forced:
        for a in anchor:
            edges.append((index[u], a))
    to_g = [old_ids[i] for i in range(len(old_ids))] + [-1] * pad_needed
    return Graph.from_edges(n, edges), tuple(to_g)


def compress_cocluster(
    graph: Graph, modulator: Modulator | frozenset[int], ell: int
) -> CoclusterReduced | CoclusterDelegate:
    """Case analysis on the complete multipartite remainder G - S.

    Three or more classes, or a K_{a,b} with a >= 2 and b >= 3, form an
    indivisible remainder: reduction rules thin it out and the compaction
    pins the bound |V(H)| <= 2k (respectively 2k + 2).  Otherwise S plus the
    small side is a vertex cover and the vertex-cover kernel takes over.
    """
    s_set = set(
        modulator.vertices if isinstance(modulator, Modulator) else modulator
    )
    k = len(s_set)
    rest = sorted(v for v in range(graph.n) if v not in s_set)
    sub, ids = graph.induced(rest)
    classes_local = cocluster_classes(sub)
    if classes_local is None:
        raise ValueError("removing the modulator does not leave a co-cluster graph")
    classes = [{ids[v] for v in cls} for cls in classes_local]

    if len(classes) >= 3:
        hgraph, to_g = _reduce_many_classes(graph, s_set, classes)
        if hgraph.n > 2 * k:
            hgraph, to_g = _compact_from_reduced(hgraph, to_g, s_set)
        if k >= 3:
            assert hgraph.n <= 2 * k, "case A kernel bound violated"
        return CoclusterReduced(hgraph, to_g, ell)

    sizes = sorted(len(c) for c in classes)
    if len(classes) == 2 and sizes[0] >= 2 and sizes[1] >= 3:
        hgraph, to_g = _reduce_two_classes(graph, s_set, classes)
        if hgraph.n > 2 * k + 2:
            hgraph, to_g = _compact_from_reduced(hgraph, to_g, s_set)
        if k >= 3:
            assert hgraph.n <= 2 * k + 2, "case B kernel bound violated"
        return CoclusterReduced(hgraph, to_g, ell)

    cover = set(s_set)
    if len(classes) == 2:
        small = min(classes, key=len)
        cover |= small
    return CoclusterDelegate(frozenset(cover))


def _reduce_many_classes(graph, s_set, classes):
    """Exhaustive application of the two >=3-classes rules: a modulator
    vertex with two remainder neighbors joins the remainder (completed to
    it), and remainder vertices without modulator neighbors vanish while at
    least three classes survive."""
    s_work = set(s_set)
    adj = [set(a) for a in graph.adj]
    classes = [set(c) for c in classes]
    removed: set[int] = set()

    def blob() -> set[int]:
        out = set()
        for c in classes:
            out |= c
        return out

    changed = True
    while changed:
        changed = False
        b = blob()
        for u in sorted(s_work):
            if sum(1 for z in adj[u] if z in b) >= 2:
                for z in b:
                    adj[u].add(z)
                    adj[z].add(u)
                s_work.discard(u)
                classes.append({u})
                changed = True
                break
        if changed:
            continue
        for u in sorted(b):
            if any(z in s_work for z in adj[u]):
                continue
            cls = next(c for c in classes if u in c)
            remaining = len(classes) - (1 if len(cls) == 1 else 0)
            if remaining >= 3:
                cls.discard(u)
                if not cls:
                    classes.remove(cls)
                for z in list(adj[u]):
                    adj[z].discard(u)
                adj[u].clear()
                removed.add(u)
                changed = True
                break
    keep = sorted(set(range(graph.n)) - removed)
    index = {v: i for i, v in enumerate(keep)}
    edges = [
        (index[u], index[v])
        for u in keep for v in adj[u] if v in index and u < v
    ]
    return Graph.from_edges(len(keep), edges), tuple(keep)


def _reduce_two_classes(graph, s_set, classes):
    """K_{a,b} case: rewire busy modulator vertices to the small side and
    drop unattached remainder vertices while both sides stay large."""
    s_work = set(s_set)
    adj = [set(a) for a in graph.adj]
    sides = sorted((set(c) for c in classes), key=lambda c: (len(c), min(c)))
    removed: set[int] = set()
    rewired: set[int] = set()

    def small_side() -> set[int]:
        return min(sides, key=lambda c: (len(c), min(c) if c else -1))

    changed = True
    while changed:
        changed = False
        b = sides[0] | sides[1]
        target = small_side()
        for u in sorted(s_work):
            nblob = {z for z in adj[u] if z in b}
            if len(nblob) >= 2 and nblob != target:
                for z in nblob:
                    adj[u].discard(z)
                    adj[z].discard(u)
                for z in target:
                    adj[u].add(z)
                    adj[z].add(u)
                rewired.add(u)
                changed = True
                break
        if changed:
            continue
        if len(sides[0]) >= 3 and len(sides[1]) >= 3:
            for u in sorted(b):
                if any(z in s_work for z in adj[u]):
                    continue
                for side in sides:
                    side.discard(u)
                for z in list(adj[u]):
                    adj[z].discard(u)
                adj[u].clear()
                removed.add(u)
                changed = True
                break
    keep = sorted(set(range(graph.n)) - removed)
    index = {v: i for i, v in enumerate(keep)}
    edges = [
        (index[u], index[v])
        for u in keep for v in adj[u] if v in index and u < v
    ]
    return Graph.from_edges(len(keep), edges), tuple(keep)


def _compact_from_reduced(hgraph: Graph, to_g, s_set) -> tuple[Graph, tuple[int, ...]]:
    """Apply the clique compaction to an already-reduced instance."""
    s_local = [i for i in range(hgraph.n) if to_g[i] in s_set]
    s_local_set = set(s_local)
    blob_local = [i for i in range(hgraph.n) if i not in s_local_set]
    forced = [
        u for u in s_local
        if sum(1 for z in hgraph.adj[u] if z not in s_local_set) >= 2
    ]
    forced_set = set(forced)
    attach = [
        (u, z)
        for u in s_local if u not in forced_set
        for z in hgraph.adj[u] if z not in s_local_set
    ]
    s_edges = [
        (u, v) for u in s_local for v in hgraph.adj[u]
        if v in s_local_set and u < v
    ]
    newg, local_map = _blob_compaction(
        s_local, forced, attach, s_edges, bool(blob_local)
    )
    final_map = tuple(
        to_g[i] if i != -1 else -1 for i in local_map
    )
    return newg, final_map


def enumerate_via_kernel(
    graph: Graph,
    modulator: Modulator,
    ell: int,
    engine: str = "oracle",
) -> Iterator[Multicut]:
    """All matching multicuts of the graph with >= ell parts, duplicate
    free, through the compressor/lifting pipeline for the given modulator
    kind (vertex-cover or co-cluster).

    Kernel-side solutions are enumerated exhaustively; the kernel has O(k^2)
    vertices so this is the parameter-bounded part of the work.
    """
    if engine != "oracle":
        raise ValueError(
            "kernel-side enumeration is exhaustive; only the oracle engine "
            "is supported"
        )
    if modulator.kind == "vertex-cover":
        yield from _enumerate_vc(graph, set(modulator.vertices), ell)
    elif modulator.kind == "co-cluster":
        result = compress_cocluster(graph, modulator, ell)
        if isinstance(result, CoclusterDelegate):
            yield from _enumerate_vc(graph, set(result.cover), ell)
            return
        for h_cut in _h_solution_edge_sets(result.graph):
            translated = set()
            ok = True
            for u, v in h_cut:
                gu, gv = result.to_g[u], result.to_g[v]
                if gu == -1 or gv == -1 or not graph.has_edge(gu, gv):
                    ok = False
                    break
                translated.add((min(gu, gv), max(gu, gv)))
            assert ok, "reduced-instance solutions only use original edges"
            cut = max_parts_of_cut(graph, translated)
            assert cut.cut_edges == frozenset(translated)
            if cut.p >= ell:
                yield cut
    else:
        raise ValueError(f"unsupported modulator kind {modulator.kind!r}")


def _enumerate_vc(graph: Graph, cover: set[int], ell: int) -> Iterator[Multicut]:
    isolated = [v for v in range(graph.n) if graph.degree(v) == 0]
    core_vertices = [v for v in range(graph.n) if graph.degree(v) > 0]
    if not core_vertices:
        cut = max_parts_of_cut(graph, [])
        if cut.p >= ell:
            yield cut
        return
    core, ids = graph.induced(core_vertices)
    back = {i: v for i, v in enumerate(ids)}
    core_cover = frozenset(
        i for i, v in enumerate(ids) if v in cover
    )
    kern = compress_vc(core, core_cover)
    # Lift in core ids, then translate to the full graph: isolated vertices
    # are singleton parts of every solution and only shift the part count.
    del isolated
    for h_cut in _h_solution_edge_sets(kern.graph):
        first = True
        for core_cut in lift_vc(core, kern, h_cut):
            g_edges = {
                (min(back[u], back[v]), max(back[u], back[v]))
                for u, v in core_cut.cut_edges
            }
            cut = max_parts_of_cut(graph, g_edges)
            if first:
                first = False
                if cut.p < ell:
                    # Part counts are constant across the class: skip it.
                    break
            yield cut
