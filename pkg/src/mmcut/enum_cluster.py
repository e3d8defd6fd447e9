"""Delay-bounded enumeration for graphs with a cluster modulator.

Five-stage pipeline.  Stage 1 applies reduction rules 1-9, maintaining a
partition of the modulator into monochromatic groups and journaling every
erased structure.  Stage 2 exhaustively enumerates the core instance H
(everything except matching clusters attached to a single monochromatic
group).  Stage 3 re-attaches the non-pendant held-out clusters through a
set-packing enumeration over their neighborhoods.  Stage 4 branches over
pendant edge clusters (and isolated edge components), the structures that
raise the part count on demand.  Stage 5 replays the journal of erased
structures, offering each its locally feasible cut modes.

Every emitted solution is a canonical multicut of the original graph.  The
stream is duplicate-free because each solution has exactly one generation
path: its core is its restriction to H, stage-3 packing choices are read
off the held-out boundaries it cuts, and every pendant unit and erased
structure owns its local modes, claimed under first-come saturation
budgets.  Candidate leaves that violate global exactness (an edge whose
endpoints remain connected) are discarded by the final validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .cuts import Edge, Multicut, max_parts_of_cut
from .graphs import Graph
from .modulators import Modulator, is_cluster_graph
from .oracle import SetPackingInstance, enumerate_all_multicuts, enumerate_set_packings


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class HeldCluster:
    """Matching cluster attached to a single monochromatic group."""

    vertices: tuple[int, ...]
    nbrs: tuple[int, ...]
    boundary: tuple[Edge, ...]
    pendant: bool  # two vertices, one host edge: handled by stage 4


@dataclass(frozen=True)
class PendantUnit:
    """Pendant edge cluster {attached, free} with its single modulator
    host, or an isolated two-vertex component (host < 0)."""

    attached: int
    free: int
    host: int
    kept: bool


@dataclass(frozen=True)
class TwinEntry:
    """Erased duplicate of a kept matching cluster."""

    vertices: tuple[int, ...]
    nbrs: tuple[int, ...]
    edge_at: tuple[tuple[int, Edge], ...]  # per neighbor w: this twin's edge
    internal_edge: Edge | None  # only for two-vertex twins


@dataclass(frozen=True)
class SimpleEdgeEntry:
    """Simple edge cluster erased because its modulator edges clash."""

    u: int
    v: int
    u_hosts: tuple[int, ...]  # N(u) inside the modulator
    v_hosts: tuple[int, ...]


@dataclass
class ClusterInstance:
    graph: Graph
    modulator: frozenset[int]
    mono: tuple[frozenset[int], ...]
    work_edges: frozenset[Edge]  # edges of the reduced graph
    alive: tuple[int, ...]
    h_vertices: tuple[int, ...]
    held: tuple[HeldCluster, ...]
    pendants: tuple[PendantUnit, ...]
    lift_entries: tuple[object, ...]  # TwinEntry / SimpleEdgeEntry, in order
    blue: frozenset[tuple[int, ...]]
    journal: tuple[tuple, ...] = field(default_factory=tuple)

    def foreign_edges(self) -> frozenset[Edge]:
        """Edges of the reduced graph absent from the original one."""
        original = {
            (u, v) if u < v else (v, u) for u, v in self.graph.edges()
        }
        return frozenset(e for e in self.work_edges if e not in original)

    def reconstruct_edges(self) -> frozenset[Edge]:
        """Undo the journal (newest first) to recover the original edges."""
        edges = set(self.work_edges)
        for event in reversed(self.journal):
            kind = event[0]
            if kind == "add-edges":
                edges.difference_update(event[1])
            elif kind == "rewire":
                edges.difference_update(event[1])
                edges.update(event[2])
            elif kind == "remove":
                edges.update(event[2])
        return frozenset(edges)


class _Reducer:
    def __init__(self, graph: Graph, modulator: frozenset[int]):
        self.graph = graph
        self.mod = set(modulator)
        self.adj: list[set[int]] = [set(a) for a in graph.adj]
        self.alive: set[int] = set(range(graph.n))
        self.mono: list[set[int]] = [{u} for u in sorted(modulator)]
        self.journal: list[tuple] = []
        self.lift_entries: list[object] = []
        self.pendant_twins: list[PendantUnit] = []
        self.blue: set[tuple[int, ...]] = set()

    # -- bookkeeping helpers ------------------------------------------------

    def part_of(self, u: int) -> int:
        for i, part in enumerate(self.mono):
            if u in part:
                return i
        raise KeyError(u)

    def merge(self, i: int, j: int) -> None:
        if i == j:
            return
        a, b = min(i, j), max(i, j)
        self.mono[a] |= self.mono[b]
        del self.mono[b]

    def clusters(self) -> list[tuple[int, ...]]:
        rest = sorted(self.alive - self.mod)
        seen: set[int] = set()
        out = []
        for s in rest:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                v = stack.pop()
                for u in self.adj[v]:
                    if u not in self.mod and u not in seen:
                        seen.add(u)
                        comp.append(u)
                        stack.append(u)
            out.append(tuple(sorted(comp)))
        return out

    def cluster_nbrs(self, cluster) -> set[int]:
        out = set()
        for v in cluster:
            out.update(u for u in self.adj[v] if u in self.mod)
        return out

    def boundary_edges(self, cluster) -> list[Edge]:
        return sorted(
            _edge(v, u)
            for v in cluster for u in self.adj[v] if u in self.mod
        )

    def is_matching_cluster(self, cluster) -> bool:
        nbrs = self.cluster_nbrs(cluster)
        if not nbrs:
            return False
        for v in cluster:
            if sum(1 for u in self.adj[v] if u in self.mod) > 1:
                return False
        for w in nbrs:
            if sum(1 for v in self.adj[w] if v in cluster) > 1:
                return False
        return True

    def nstar(self, part: set[int]) -> set[int]:
        """Vertices outside the modulator glued to this monochromatic group."""
        out = {
            v for v in self.alive - self.mod
            if sum(1 for u in self.adj[v] if u in part) >= 2
        }
        for cluster in self.clusters():
            cset = set(cluster)
            by_vertex = any(
                sum(1 for u in self.adj[v] if u in part) >= 2 for v in cluster
            )
            if len(cluster) >= 3 and by_vertex:
                out |= cset
                continue
            if any(
                sum(1 for z in self.adj[u] if z in cset) >= 2 for u in part
            ):
                out |= cset
        return out

    def remove_vertex(self, v: int, reason: str) -> None:
        incident = tuple(sorted(_edge(v, u) for u in self.adj[v]))
        for u in list(self.adj[v]):
            self.adj[u].discard(v)
        self.adj[v].clear()
        self.alive.discard(v)
        self.journal.append(("remove", reason, incident, v))

    # -- the reduction rules ------------------------------------------------

    def run(self) -> None:
        while self._apply_one():
            pass

    def _apply_one(self) -> bool:
        return (
            self._rule1() or self._rule2() or self._rule3() or self._rule4()
            or self._rule5() or self._rule6() or self._rule7()
            or self._rule89()
        )

    def _rule1(self) -> bool:
        stars = [self.nstar(part) for part in self.mono]
        for i in range(len(stars)):
            for j in range(i + 1, len(stars)):
                if stars[i] & stars[j]:
                    self.merge(i, j)
                    return True
        return False

    def _rule2(self) -> bool:
        mod = sorted(self.mod & self.alive)
        for ui_idx, u in enumerate(mod):
            for up in mod[ui_idx + 1:]:
                if self.part_of(u) == self.part_of(up):
                    continue
                common = self.adj[u] & self.adj[up] & self.alive
                if len(common) >= 3:
                    self.merge(self.part_of(u), self.part_of(up))
                    return True
        return False

    def _rule3(self) -> bool:
        for part in self.mono:
            star = self.nstar(part)
            inside = [c for c in self.clusters() if set(c) <= star]
            if len(inside) >= 2:
                c1, c2 = inside[0], inside[1]
                added = []
                for a in c1:
                    for b in c2:
                        if b not in self.adj[a]:
                            self.adj[a].add(b)
                            self.adj[b].add(a)
                            added.append(_edge(a, b))
                self.journal.append(("add-edges", tuple(sorted(added))))
                return True
        return False

    def _rule4(self) -> bool:
        for cluster in self.clusters():
            if len(cluster) <= 3:
                continue
            for v in cluster:
                if not any(u in self.mod for u in self.adj[v]):
                    self.remove_vertex(v, "rule4")
                    return True
        return False

    def _rule5(self) -> bool:
        for part in self.mono:
            star = self.nstar(part)
            for cluster in self.clusters():
                if len(cluster) < 3 or not set(cluster) <= star:
                    continue
                cset = set(cluster)
                u = min(part)
                expected = {_edge(u, cluster[0]), _edge(u, cluster[1])}
                if len(part) == 2:
                    expected.add(_edge(max(part), cluster[2]))
                current = {
                    _edge(w, c)
                    for w in part for c in self.adj[w] if c in cset
                }
                clique_missing = []
                if len(part) > 2:
                    ps = sorted(part)
                    for a_idx, a in enumerate(ps):
                        for b in ps[a_idx + 1:]:
                            if b not in self.adj[a]:
                                clique_missing.append(_edge(a, b))
                if current == expected and not clique_missing:
                    continue
                removed = sorted(current - expected)
                added = sorted(expected - current) + clique_missing
                for a, b in removed:
                    self.adj[a].discard(b)
                    self.adj[b].discard(a)
                for a, b in added:
                    self.adj[a].add(b)
                    self.adj[b].add(a)
                self.journal.append(("rewire", tuple(added), tuple(removed)))
                return True
        return False

    def _simple_hosts(self, cluster) -> tuple | None:
        """For an edge cluster, (u_hosts, v_hosts) when both endpoints see at
        most one monochromatic group each; None when an endpoint is
        ambiguous."""
        hosts = []
        for a in cluster:
            ws = sorted(w for w in self.adj[a] if w in self.mod)
            if len({self.part_of(w) for w in ws}) > 1:
                return None
            hosts.append(tuple(ws))
        return hosts[0], hosts[1]

    def _rule6(self) -> bool:
        for cluster in self.clusters():
            if len(cluster) != 2:
                continue
            hosts = self._simple_hosts(cluster)
            if hosts is None:
                continue
            u_hosts, v_hosts = hosts
            if len(u_hosts) <= 1 and len(v_hosts) <= 1:
                continue  # forms a matching with the modulator
            u, v = cluster
            self.lift_entries.append(SimpleEdgeEntry(u, v, u_hosts, v_hosts))
            self.remove_vertex(u, "rule6")
            self.remove_vertex(v, "rule6")
            return True
        return False

    def _rule7(self) -> bool:
        big = [c for c in self.clusters() if len(c) >= 3]
        mod = sorted(self.mod & self.alive)
        for ui_idx, u in enumerate(mod):
            for up in mod[ui_idx + 1:]:
                if self.part_of(u) == self.part_of(up):
                    continue
                hits = 0
                for c in big:
                    cset = set(c)
                    if self.adj[u] & cset and self.adj[up] & cset:
                        hits += 1
                if hits >= 3:
                    self.merge(self.part_of(u), self.part_of(up))
                    return True
        return False

    def _rule89(self) -> bool:
        groups: dict[tuple, list[tuple[int, ...]]] = {}
        for c in self.clusters():
            if self.is_matching_cluster(c):
                key = (len(c), tuple(sorted(self.cluster_nbrs(c))))
                groups.setdefault(key, []).append(c)
        for (size, nbrs), members in sorted(groups.items()):
            members.sort()
            keep = 2 if (size == 2 and len(nbrs) == 2) else 1
            if len(members) <= keep:
                continue
            victim = members[keep]
            self._record_twin(victim, nbrs, size)
            for v in victim:
                self.remove_vertex(v, "rule8" if keep == 1 else "rule9")
            if keep == 1:
                self.blue.add(members[0])
            return True
        return False

    def _record_twin(self, victim, nbrs, size) -> None:
        if size == 2 and len(nbrs) == 1:
            w = nbrs[0]
            attached = next(v for v in victim if w in self.adj[v])
            free = next(v for v in victim if v != attached)
            self.pendant_twins.append(PendantUnit(attached, free, w, False))
            return
        edge_at = tuple(
            (w, _edge(w, next(v for v in victim if w in self.adj[v])))
            for w in nbrs
        )
        internal = _edge(*victim) if size == 2 else None
        self.lift_entries.append(TwinEntry(victim, nbrs, edge_at, internal))


def _structure_asserts(red: _Reducer) -> None:
    r = len(red.mod)
    pair_bound = 3 * (r * (r - 1) // 2)
    ambiguous = [
        v for v in red.alive - red.mod
        if len({red.part_of(w) for w in red.adj[v] if w in red.mod}) >= 2
    ]
    assert len(ambiguous) <= pair_bound, "too many ambiguous vertices"
    clusters = red.clusters()
    # A cluster keeps at most 3 rewired host edges plus one attachment per
    # other monochromatic group; oversized remainders lose their unattached
    # vertices.
    size_cap = r + 3
    assert all(len(c) <= size_cap for c in clusters), "oversized cluster"
    spanning = [
        c for c in clusters
        if len(c) >= 3 and red.is_matching_cluster(c)
        and len({red.part_of(w) for w in red.cluster_nbrs(c)}) >= 2
    ]
    assert len(spanning) <= pair_bound, "too many spanning matching clusters"
    fixed_or_ambig = 0
    stars = [red.nstar(part) for part in red.mono]
    amb = set(ambiguous)
    for c in clusters:
        if len(c) == 2:
            continue
        if any(set(c) <= s for s in stars) or amb.intersection(c):
            fixed_or_ambig += 1
    assert fixed_or_ambig <= r + pair_bound, "too many fixed/ambiguous clusters"


def reduce_cluster_instance(graph: Graph, modulator) -> ClusterInstance:
    """Stage 1: run rules 1-9 to a fixed point and classify the remains."""
    mod = frozenset(
        modulator.vertices if isinstance(modulator, Modulator) else modulator
    )
    rest = [v for v in range(graph.n) if v not in mod]
    sub, _ = graph.induced(rest)
    if not is_cluster_graph(sub):
        raise ValueError("removing the modulator does not leave a cluster graph")
    red = _Reducer(graph, mod)
    red.run()
    _structure_asserts(red)

    mono = tuple(frozenset(p) for p in red.mono)
    part_index = {u: i for i, p in enumerate(mono) for u in p}
    held: list[HeldCluster] = []
    pendants: list[PendantUnit] = list(red.pendant_twins)
    h_vertices = set(red.alive)
    for cluster in red.clusters():
        nbrs = sorted(red.cluster_nbrs(cluster))
        if not nbrs:
            h_vertices.difference_update(cluster)
            if len(cluster) == 2:
                # Isolated edge component: its internal cut is a free part.
                pendants.append(
                    PendantUnit(cluster[0], cluster[1], -1, True)
                )
            continue
        if not red.is_matching_cluster(cluster):
            continue
        if len({part_index[w] for w in nbrs}) != 1:
            continue
        h_vertices.difference_update(cluster)
        pendant = len(cluster) == 2 and len(nbrs) == 1
        held.append(
            HeldCluster(
                cluster, tuple(nbrs),
                tuple(red.boundary_edges(cluster)), pendant,
            )
        )
        if pendant:
            w = nbrs[0]
            attached = next(v for v in cluster if w in red.adj[v])
            free = next(v for v in cluster if v != attached)
            pendants.append(PendantUnit(attached, free, w, True))
    pendants.sort(key=lambda p: (p.attached, p.free))
    held.sort(key=lambda c: c.vertices)

    work_edges = frozenset(
        _edge(v, u) for v in red.alive for u in red.adj[v] if v < u
    )
    inst = ClusterInstance(
        graph=graph,
        modulator=mod,
        mono=mono,
        work_edges=work_edges,
        alive=tuple(sorted(red.alive)),
        h_vertices=tuple(sorted(h_vertices)),
        held=tuple(held),
        pendants=tuple(pendants),
        lift_entries=tuple(red.lift_entries),
        blue=frozenset(red.blue),
        journal=tuple(red.journal),
    )
    r = len(mod)
    bound = r + (r + 6 * (r * (r - 1) // 2)) * (r + 3) + 10 * (r * (r - 1) // 2)
    assert len(inst.h_vertices) <= max(bound, 1), "core instance too large"
    return inst


def enumerate_core(inst: ClusterInstance) -> Iterator[frozenset[Edge]]:
    """Stage 2: all matching multicut edge sets of the core instance H.

    Reduction rules may have added edges that do not exist in the original
    graph (cluster merges, rewired attachments); no restriction of an
    original solution cuts those, so core solutions using them are
    spurious and skipped."""
    if not inst.h_vertices:
        yield frozenset()
        return
    foreign = inst.foreign_edges()
    hgraph, ids = _induced_on_work(inst, inst.h_vertices)
    for cut in enumerate_all_multicuts(hgraph, 1, limit=hgraph.n):
        edges = frozenset(_edge(ids[u], ids[v]) for u, v in cut.cut_edges)
        if not edges & foreign:
            yield edges


def _induced_on_work(inst: ClusterInstance, vertices) -> tuple[Graph, list[int]]:
    keep = sorted(vertices)
    index = {v: i for i, v in enumerate(keep)}
    edges = [
        (index[u], index[v])
        for u, v in inst.work_edges if u in index and v in index
    ]
    return Graph.from_edges(len(keep), edges), keep


def _saturated(cut_edges) -> set[int]:
    out = set()
    for u, v in cut_edges:
        out.add(u)
        out.add(v)
    return out


def _lift_vertices(inst: ClusterInstance) -> set[int]:
    out: set[int] = set()
    for entry in inst.lift_entries:
        if isinstance(entry, SimpleEdgeEntry):
            out.update((entry.u, entry.v))
        else:
            out.update(entry.vertices)
    return out


def _parts_excluding(
    graph: Graph, cut: frozenset[Edge], excluded: set[int]
) -> tuple[int, list[int]]:
    """Components of (G - excluded) - cut: the partition against which the
    lifting stage evaluates its mode conditions.  Erased structures would
    otherwise bridge parts they are not yet committed to."""
    part = [-1] * graph.n
    p = 0
    for s in range(graph.n):
        if part[s] != -1 or s in excluded:
            continue
        part[s] = p
        stack = [s]
        while stack:
            v = stack.pop()
            for u in graph.adj[v]:
                if part[u] != -1 or u in excluded:
                    continue
                if _edge(v, u) not in cut:
                    part[u] = p
                    stack.append(u)
        p += 1
    return p, part


def extend_with_matching_clusters(
    inst: ClusterInstance, core_cut: frozenset[Edge]
) -> Iterator[frozenset[Edge]]:
    """Stage 3: every way of additionally cutting non-pendant held-out
    clusters whose whole neighborhood is still unsaturated, via set packing
    over those neighborhoods.  Pendant units wait for stage 4."""
    saturated = _saturated(core_cut)
    eligible = [
        hc for hc in inst.held
        if not hc.pendant and not saturated.intersection(hc.nbrs)
    ]
    if not eligible:
        yield core_cut
        return
    universe = sorted({w for hc in eligible for w in hc.nbrs})
    uindex = {w: i for i, w in enumerate(universe)}
    family = tuple(frozenset(uindex[w] for w in hc.nbrs) for hc in eligible)
    packing_inst = SetPackingInstance(len(universe), family, 0)
    for packing in enumerate_set_packings(packing_inst, 0):
        cut = set(core_cut)
        for idx in packing:
            cut.update(eligible[idx].boundary)
        yield frozenset(cut)


def extend_with_pendant_clusters(
    inst: ClusterInstance,
    cut: frozenset[Edge],
    ell: int,
    extra_potential: int = 0,
) -> Iterator[frozenset[Edge]]:
    """Stage 4: recursive branching over pendant units.

    Each unit may stay put, cut its internal edge (a new singleton part), or
    cut its host edge when the host is still unsaturated (the unit becomes
    its own part).  Prunes as soon as the remaining units plus the lifting
    potential cannot reach the target part count."""
    base_p, _ = _parts_excluding(inst.graph, cut, _lift_vertices(inst))
    current = set(cut)
    saturated = _saturated(cut)

    def rec(idx: int, parts: int) -> Iterator[frozenset[Edge]]:
        remaining = len(inst.pendants) - idx
        if parts + remaining + extra_potential < ell:
            return
        if idx == len(inst.pendants):
            yield frozenset(current)
            return
        unit = inst.pendants[idx]
        # Skip branch.
        yield from rec(idx + 1, parts)
        # Internal branch: the free endpoint becomes a singleton part.
        internal = _edge(unit.attached, unit.free)
        current.add(internal)
        saturated.update(internal)
        yield from rec(idx + 1, parts + 1)
        saturated.difference_update(internal)
        current.discard(internal)
        # Host branch: the whole unit becomes its own part.
        if unit.host >= 0 and unit.host not in saturated:
            host_edge = _edge(unit.attached, unit.host)
            current.add(host_edge)
            saturated.update(host_edge)
            yield from rec(idx + 1, parts + 1)
            saturated.difference_update(host_edge)
            current.discard(host_edge)

    yield from rec(0, base_p)


class _LiftParts:
    """Union-find over the exclusion-partition part ids, with undo.

    Re-adding an erased structure uncut may merge the parts its endpoints
    hang from; the merge is feasible unless some current cut edge runs
    between the two parts (it would stop separating).  Fresh ids are
    allocated for new singleton parts created by cut modes.
    """

    def __init__(self, count: int):
        self.parent = list(range(count))
        self.trail: list[tuple[int, int]] = []
        self.pairs: list[tuple[Edge, int, int]] = []  # cut edge, base ids

    def fresh(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.trail.append((rb, self.parent[rb]))
            self.parent[rb] = ra

    def mark(self) -> tuple[int, int, int]:
        return len(self.trail), len(self.pairs), len(self.parent)

    def rollback(self, mark: tuple[int, int, int]) -> None:
        t, q, n = mark
        while len(self.trail) > t:
            node, old = self.trail.pop()
            self.parent[node] = old
        del self.pairs[q:]
        del self.parent[n:]

    def blocked_merge(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        for _edge_, pa, pb in self.pairs:
            fa, fb = self.find(pa), self.find(pb)
            if (fa, fb) in ((ra, rb), (rb, ra)):
                return True
        return False

    def record_cut(self, edge: Edge, pa: int, pb: int) -> None:
        self.pairs.append((edge, pa, pb))


def lift_cluster(
    inst: ClusterInstance, cut: frozenset[Edge], ell: int
) -> Iterator[Multicut]:
    """Stage 5: replay the journal of erased structures in order, branching
    over each one's locally feasible cut modes, and emit the canonical
    multicuts of the original graph that reach the target part count."""
    graph = inst.graph
    base_count, part_of = _parts_excluding(graph, cut, _lift_vertices(inst))
    uf = _LiftParts(base_count)
    for a, b in cut:
        uf.record_cut((a, b), part_of[a], part_of[b])

    def group_part(hosts) -> int | None:
        return part_of[hosts[0]] if hosts else None

    current = set(cut)
    saturated = _saturated(cut)
    entries = inst.lift_entries

    def rec(idx: int) -> Iterator[frozenset[Edge]]:
        if idx == len(entries):
            yield frozenset(current)
            return
        entry = entries[idx]
        if isinstance(entry, SimpleEdgeEntry):
            yield from _simple_modes(entry, idx)
        else:
            yield from _twin_modes(entry, idx)

    def _with_cut(edges_pairs, idx):
        """Add cut edges (with their part pairs), recurse, undo."""
        mark = uf.mark()
        ends = []
        for edge, pa, pb in edges_pairs:
            current.add(edge)
            ends.extend(edge)
            uf.record_cut(edge, pa, pb)
        saturated.update(ends)
        yield from rec(idx + 1)
        saturated.difference_update(ends)
        for edge, _pa, _pb in edges_pairs:
            current.discard(edge)
        uf.rollback(mark)

    def _simple_modes(entry: SimpleEdgeEntry, idx: int):
        pu = group_part(entry.u_hosts)
        pv = group_part(entry.v_hosts)
        # Stay uncut: the structure bridges its two host sides, merging
        # their parts if no cut edge runs between them.
        if pu is None or pv is None or uf.find(pu) == uf.find(pv):
            yield from rec(idx + 1)
        elif not uf.blocked_merge(pu, pv):
            mark = uf.mark()
            uf.union(pu, pv)
            yield from rec(idx + 1)
            uf.rollback(mark)
        # Internal cut: endpoints part ways with their host sides.
        if (
            graph.has_edge(entry.u, entry.v)
            and (pu is None or pv is None or uf.find(pu) != uf.find(pv))
        ):
            mark = uf.mark()
            pa = pu if pu is not None else uf.fresh()
            pb = pv if pv is not None else uf.fresh()
            yield from _with_cut(
                [(_edge(entry.u, entry.v), pa, pb)], idx
            )
            uf.rollback(mark)
        # Single host-edge cuts, only available for a one-host endpoint;
        # the pair lands in the other side's part (or a new one).
        for a, a_hosts, pa, pb in (
            (entry.u, entry.u_hosts, pu, pv),
            (entry.v, entry.v_hosts, pv, pu),
        ):
            if len(a_hosts) != 1:
                continue
            w = a_hosts[0]
            if w in saturated:
                continue
            if pb is not None and uf.find(pa) == uf.find(pb):
                continue
            mark = uf.mark()
            side = pb if pb is not None else uf.fresh()
            yield from _with_cut([(_edge(a, w), side, pa)], idx)
            uf.rollback(mark)

    def _twin_modes(entry: TwinEntry, idx: int):
        # Skip: the twin hangs uncut from its hosts, merging their parts.
        host_parts = sorted({part_of[w] for w in entry.nbrs})
        if len(host_parts) == 1 or uf.find(host_parts[0]) == uf.find(host_parts[1]):
            yield from rec(idx + 1)
        elif not uf.blocked_merge(host_parts[0], host_parts[1]):
            mark = uf.mark()
            uf.union(host_parts[0], host_parts[1])
            yield from rec(idx + 1)
            uf.rollback(mark)
        split = (
            len(host_parts) == 2
            and uf.find(host_parts[0]) != uf.find(host_parts[1])
        )
        p_at = {w: part_of[w] for w, _e in entry.edge_at}
        # Internal cut of a two-vertex twin needs its hosts split apart.
        if entry.internal_edge is not None and split:
            (w1, _e1), (w2, _e2) = entry.edge_at
            yield from _with_cut(
                [(entry.internal_edge, p_at[w1], p_at[w2])], idx
            )
        # Full boundary cut: the twin becomes its own part.
        if all(w not in saturated for w, _e in entry.edge_at):
            mark = uf.mark()
            own = uf.fresh()
            yield from _with_cut(
                [(e, own, p_at[w]) for w, e in entry.edge_at], idx
            )
            uf.rollback(mark)
        # Half cuts for two-vertex twins whose hosts sit in different parts.
        if entry.internal_edge is not None and split:
            others = {w: o for (w, _e), (o, _e2) in
                      zip(entry.edge_at, reversed(entry.edge_at))}
            for w, e in entry.edge_at:
                if w in saturated:
                    continue
                yield from _with_cut([(e, p_at[others[w]], p_at[w])], idx)

    for final in rec(0):
        out = max_parts_of_cut(graph, final)
        if out.cut_edges != final:
            continue
        if out.p >= ell:
            yield out


def _lift_part_potential(inst: ClusterInstance) -> int:
    """Upper bound on parts stage 5 can still add: one per erased twin
    (full boundary cut) plus one per erased simple edge cluster with an
    unattached endpoint (singleton via the internal cut)."""
    out = 0
    for e in inst.lift_entries:
        if isinstance(e, TwinEntry):
            out += 1
        elif not e.u_hosts or not e.v_hosts:
            out += 1
    return out


def enumerate_cluster(graph: Graph, modulator, ell: int) -> Iterator[Multicut]:
    """All canonical matching multicuts of the graph with at least ``ell``
    parts, each exactly once, via the five-stage pipeline."""
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell > graph.n:
        return
    inst = reduce_cluster_instance(graph, modulator)
    extra = _lift_part_potential(inst)
    for core_cut in enumerate_core(inst):
        for packed in extend_with_matching_clusters(inst, core_cut):
            for staged in extend_with_pendant_clusters(inst, packed, ell, extra):
                yield from lift_cluster(inst, staged, ell)
