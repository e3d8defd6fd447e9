"""Exact branch-and-reduce solver for matching multicuts.

The search works over partial assignments of vertices to at most ``ell``
part labels plus a free pool, driven by stopping rules S1-S4, reduction
rules R1-R7 and branching configurations B1-B8/B4'.  Part-permutation
symmetry is broken by restricted growth (label j+1 only opens after label
j) and by seeding: isolated vertices and pendants with distinct hosts are
pinned as frozen singleton parts (any witness can be rearranged that way),
then the lowest remaining vertex anchors the next label.

Two engine-level additions keep the rule set complete on arbitrary inputs:
pendant vertices get a dedicated two-way branch (open a fresh singleton
part or join the host's part), and when neither a configuration nor a
valid closing assignment exists the engine falls back to branching the
lowest free vertex over every open label.  A candidate assignment is
accepted iff its canonical form has at least ``ell`` parts, so labelings
that merge several connected parts into one label still certify a yes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cuts import Multicut, _crossing_violation, canonicalize
from .graphs import Graph

FREE = -1

STOP_RULES = ("S1", "S2", "S3", "S4")
REDUCTION_RULES = ("R1", "R2", "R3", "R4", "R5", "R6", "R7")
BRANCH_RULES = ("B1", "B2", "B3", "B4", "B4'", "B5", "B6", "B7", "B8")


@dataclass
class RuleTrace:
    """Journal of rule applications: (rule id, ((vertex, part), ...)).

    Replaying the assignments from the initial state reproduces the final
    state; stopping rules appear with an empty assignment tuple.
    """

    applications: list[tuple[str, tuple[tuple[int, int], ...]]] = field(
        default_factory=list
    )

    def record(self, rule: str, assigned: tuple[tuple[int, int], ...]) -> None:
        self.applications.append((rule, assigned))

    def replay(self, state: "PartialState") -> "PartialState":
        out = state.copy()
        for _rule, assigned in self.applications:
            for v, p in assigned:
                if not out.assign_vertex(v, p):
                    raise ValueError("trace replay hit an invalid assignment")
        return out


class PartialState:
    """Assignment of vertices to parts 0..ell-1, FREE for unassigned.

    ``cross`` tracks, per assigned vertex, its realized number of neighbors
    in other parts; assignments that would push any count past one are
    rejected at the door.
    """

    __slots__ = (
        "graph", "ell", "assign", "used", "cross", "free_count", "frozen"
    )

    def __init__(self, graph: Graph, ell: int):
        if ell < 1:
            raise ValueError("ell must be positive")
        self.graph = graph
        self.ell = ell
        self.assign = [FREE] * graph.n
        self.used = 0
        self.cross = [0] * graph.n
        self.free_count = graph.n
        self.frozen = 0  # parts 0..frozen-1 are pinned singleton seeds

    def copy(self) -> "PartialState":
        out = PartialState.__new__(PartialState)
        out.graph = self.graph
        out.ell = self.ell
        out.assign = self.assign[:]
        out.used = self.used
        out.cross = self.cross[:]
        out.free_count = self.free_count
        out.frozen = self.frozen
        return out

    def is_free(self, v: int) -> bool:
        return self.assign[v] == FREE

    def free_vertices(self) -> list[int]:
        return [v for v in range(self.graph.n) if self.assign[v] == FREE]

    def assign_vertex(self, v: int, p: int) -> bool:
        """Place v into part p; False when this is immediately infeasible.

        Re-assigning to the same part is a no-op; to a different part it
        fails.  Opening part ``used`` grows the label set by one.
        """
        if self.assign[v] != FREE:
            return self.assign[v] == p
        if p > self.used or p >= self.ell or p < self.frozen:
            return False
        adj = self.graph.adj[v]
        assign = self.assign
        newly_crossed = []
        vcross = 0
        for u in adj:
            pu = assign[u]
            if pu != FREE and pu != p:
                vcross += 1
                if vcross > 1 or self.cross[u] >= 1:
                    return False
                newly_crossed.append(u)
        assign[v] = p
        self.cross[v] = vcross
        for u in newly_crossed:
            self.cross[u] += 1
        if p == self.used:
            self.used += 1
        self.free_count -= 1
        return True

    def part_contacts(self, v: int) -> dict[int, int]:
        """Part -> number of assigned neighbors of the free vertex v."""
        cont: dict[int, int] = {}
        for u in self.graph.adj[v]:
            pu = self.assign[u]
            if pu != FREE:
                cont[pu] = cont.get(pu, 0) + 1
        return cont

    def free_neighbors(self, v: int) -> list[int]:
        return [u for u in self.graph.adj[v] if self.assign[u] == FREE]

    def open_parts(self, exclude: tuple[int, ...] = ()) -> list[int]:
        """Joinable used parts plus one fresh label (restricted growth)."""
        out = [p for p in range(self.frozen, self.used) if p not in exclude]
        if self.used < self.ell:
            out.append(self.used)
        return out


def apply_stopping_rules(state: PartialState) -> str | None:
    """First stopping rule that proves no extension exists, else None."""
    graph = state.graph
    assign = state.assign
    # S1: a free vertex with two strong part contacts.
    for v in range(graph.n):
        if assign[v] != FREE:
            continue
        cont = state.part_contacts(v)
        strong = sum(1 for c in cont.values() if c >= 2)
        if strong >= 2:
            return "S1"
    # S2: a free vertex touching three parts.
    for v in range(graph.n):
        if assign[v] == FREE and len(state.part_contacts(v)) >= 3:
            return "S2"
    # S3: a crossing edge whose endpoints share a free neighbor.
    for u in range(graph.n):
        pu = assign[u]
        if pu == FREE:
            continue
        for v in graph.adj[u]:
            if u < v and assign[v] != FREE and assign[v] != pu:
                common = set(graph.adj[u]).intersection(graph.adj[v])
                if any(assign[z] == FREE for z in common):
                    return "S3"
    # S4: an assigned vertex with two realized crossings.  Recomputed from
    # adjacency so externally built states are handled too.
    for v in range(graph.n):
        pv = assign[v]
        if pv == FREE:
            continue
        outside = sum(
            1 for u in graph.adj[v] if assign[u] != FREE and assign[u] != pv
        )
        if outside >= 2:
            return "S4"
    return None


def _find_reduction(state: PartialState) -> tuple[str, tuple[tuple[int, int], ...]] | None:
    graph = state.graph
    assign = state.assign

    # R1: an assigned vertex with an adjacent free pair pulls the pair in.
    for v in range(graph.n):
        pv = assign[v]
        if pv == FREE:
            continue
        fnb = state.free_neighbors(v)
        for i, x in enumerate(fnb):
            xadj = graph.adj[x]
            for y in fnb[i + 1:]:
                if y in xadj:
                    return ("R1", ((x, pv), (y, pv)))
    # R2: a free vertex with two neighbors in a unique part joins it.
    for v in range(graph.n):
        if assign[v] != FREE:
            continue
        strong = [p for p, c in state.part_contacts(v).items() if c >= 2]
        if len(strong) == 1:
            return ("R2", ((v, strong[0]),))
    # R3: a crossing edge forces both endpoints' free neighbors inward.
    for u in range(graph.n):
        pu = assign[u]
        if pu == FREE:
            continue
        for v in graph.adj[u]:
            pv = assign[v]
            if u < v and pv != FREE and pv != pu:
                moves = [(z, pu) for z in state.free_neighbors(u)]
                moves += [(z, pv) for z in state.free_neighbors(v)]
                if moves:
                    return ("R3", tuple(moves))
    # R4/R5: free degree-2 twins over an assigned pair.
    twins: dict[tuple[int, int], list[int]] = {}
    for v in range(graph.n):
        if assign[v] == FREE and len(graph.adj[v]) == 2:
            twins.setdefault(graph.adj[v], []).append(v)
    for (x, y), members in sorted(twins.items()):
        if len(members) < 2:
            continue
        u, v = members[0], members[1]
        px, py = assign[x], assign[y]
        if px != FREE and py != FREE and px != py:
            return ("R4", ((u, px), (v, py)))
    for (x, y), members in sorted(twins.items()):
        if len(members) < 2:
            continue
        u = members[0]
        px, py = assign[x], assign[y]
        if px != FREE and py == FREE:
            return ("R5", ((u, px),))
        if py != FREE and px == FREE:
            return ("R5", ((u, py),))
    # R6: a free degree-2 bridge between two saturated-neighborhood parts.
    for v in range(graph.n):
        if assign[v] != FREE or len(graph.adj[v]) != 2:
            continue
        x, y = graph.adj[v]
        px, py = assign[x], assign[y]
        if px == FREE or py == FREE or px == py:
            continue
        if all(assign[z] == px or z == v for z in graph.adj[x]) and all(
            assign[z] == py or z == v for z in graph.adj[y]
        ):
            # Either side works; a pinned singleton part cannot take v.
            target = px if px >= state.frozen else py
            return ("R6", ((v, target),))
    # R7: only sound when maximizing two parts; for larger targets the
    # forced move can destroy an extra-part completion, so it stays off.
    if state.ell == 2:
        move = _find_r7(state)
        if move is not None:
            return move
    return None


def _find_r7(state: PartialState) -> tuple[str, tuple[tuple[int, int], ...]] | None:
    graph = state.graph
    assign = state.assign
    for u in range(graph.n):
        if assign[u] != FREE or len(graph.adj[u]) != 2:
            continue
        v, w = graph.adj[u]
        if assign[v] != FREE or assign[w] != FREE:
            continue
        if len(graph.adj[v]) != 2 or len(graph.adj[w]) != 2:
            continue
        x = next(z for z in graph.adj[v] if z != u)
        y = next(z for z in graph.adj[w] if z != u)
        if assign[x] == FREE or assign[y] == FREE or assign[x] == assign[y]:
            continue
        vprime = [z for z in state.free_neighbors(x) if z != v]
        wprime = [z for z in state.free_neighbors(y) if z != w]
        if not vprime or not wprime:
            continue
        named = {u, v, w, x, y, vprime[0], wprime[0]}
        if len(named) != 7:
            continue
        return ("R7", ((u, assign[x]), (v, assign[x]), (w, assign[y])))
    return None


def apply_reduction_rules(
    state: PartialState,
) -> tuple[PartialState | None, RuleTrace]:
    """Run S/R rules to a fixed point.

    Returns (reduced state, trace), or (None, trace) when a stopping rule
    fires; the trace then ends with the stopping rule's id.
    """
    trace = RuleTrace()
    current = state.copy()
    while True:
        dead = apply_stopping_rules(current)
        if dead is not None:
            trace.record(dead, ())
            return None, trace
        found = _find_reduction(current)
        if found is None:
            return current, trace
        rule, moves = found
        for v, p in moves:
            if not current.assign_vertex(v, p):
                # The forced move is infeasible: no extension exists.
                trace.record(rule, moves)
                return None, trace
        trace.record(rule, moves)


def _qualifying_arms(state: PartialState, v1: int) -> list[tuple[int, int, int, int]]:
    """Free neighbors of v1 shaped like B4/B5/B6 arms.

    Returns (arm vertex, anchor vertex, anchor part, anchor's spare free
    neighbor) for every free degree-2 neighbor whose other endpoint is
    assigned and still has a second free neighbor.
    """
    graph = state.graph
    out = []
    for u in state.free_neighbors(v1):
        if len(graph.adj[u]) != 2:
            continue
        other = next(z for z in graph.adj[u] if z != v1)
        if state.assign[other] == FREE:
            continue
        spare = [z for z in state.free_neighbors(other) if z != u]
        if not spare:
            continue
        out.append((u, other, state.assign[other], spare[0]))
    return out


def _children(state, assignments_list):
    """Materialize child states, dropping immediately infeasible ones."""
    out = []
    for moves in assignments_list:
        child = state.copy()
        ok = True
        for v, p in moves:
            if not child.assign_vertex(v, p):
                ok = False
                break
        if ok:
            out.append(child)
    return out


def _detect_b1(state, v1, cont, fnb):
    if len(cont) != 1 or len(fnb) < 2:
        return None
    (i, _count), = cont.items()
    anchors = [
        u for u in state.graph.adj[v1]
        if state.assign[u] == i and any(
            z != v1 for z in state.free_neighbors(u)
        )
    ]
    if not anchors:
        return None
    a = anchors[0]
    v2 = min(z for z in state.free_neighbors(a) if z != v1)
    v3, v4 = fnb[0], fnb[1]
    branches = [(((v1, i),))]
    for j in state.open_parts(exclude=(i,)):
        branches.append(((v1, j), (v3, j), (v4, j), (v2, i)))
    return branches


def _detect_b2(state, v1, cont, fnb):
    if len(cont) != 2 or not fnb:
        return None
    anchors = [u for u in state.graph.adj[v1] if state.assign[u] != FREE]
    with_spare = [
        u for u in anchors if any(z != v1 for z in state.free_neighbors(u))
    ]
    if not with_spare:
        return None
    a = with_spare[0]
    i = state.assign[a]
    others = [u for u in anchors if state.assign[u] != i]
    if not others:
        return None
    j = state.assign[others[0]]
    v2 = min(z for z in state.free_neighbors(a) if z != v1)
    v4 = fnb[0]
    return [((v1, i), (v4, i)), ((v1, j), (v4, j), (v2, i))]


def _detect_b3(state, v1, cont, fnb):
    if len(cont) != 2 or not fnb:
        return None
    i, j = sorted(cont)
    v2 = fnb[0]
    return [((v1, i), (v2, i)), ((v1, j), (v2, j))]


def _detect_b4(state, v1, cont, fnb):
    if cont or len(fnb) < 3:
        return None
    arms = _qualifying_arms(state, v1)
    if len(arms) < 2:
        return None
    v2, x, i, v2p = arms[0]
    rest = [arm for arm in arms if arm[2] != i]
    if not rest:
        return None
    v3, y, j, v3p = rest[0]
    leftover = [z for z in fnb if z not in (v2, v3)]
    if not leftover:
        return None
    v4 = leftover[0]
    branches = [((v1, i), (v2, i)), ((v1, j), (v3, j))]
    for k in state.open_parts(exclude=(i, j)):
        branches.append(((v1, k), (v2, k), (v3, k), (v2p, i), (v3p, j)))
        branches.append(((v2, i), (v1, k), (v3, k), (v4, k), (v3p, j)))
        branches.append(((v3, j), (v1, k), (v2, k), (v4, k), (v2p, i)))
    return branches


def _detect_b4prime(state, v1, cont, fnb):
    if cont or len(fnb) < 3:
        return None
    arms = _qualifying_arms(state, v1)
    if len(arms) < 2:
        return None
    by_part: dict[int, list] = {}
    for arm in arms:
        by_part.setdefault(arm[2], []).append(arm)
    for i in sorted(by_part):
        group = by_part[i]
        distinct = []
        seen_anchor = set()
        for arm in group:
            if arm[1] not in seen_anchor:
                seen_anchor.add(arm[1])
                distinct.append(arm)
        if len(distinct) < 2:
            continue
        v2, _x, _i, v2p = distinct[0]
        v3, _xp, _i2, v3p = distinct[1]
        leftover = [z for z in fnb if z not in (v2, v3)]
        if not leftover:
            continue
        v4 = leftover[0]
        branches = [((v1, i), (v2, i), (v3, i))]
        for k in state.open_parts(exclude=(i,)):
            branches.append(((v1, k), (v2, k), (v3, k), (v2p, i), (v3p, i)))
            branches.append(((v2, i), (v1, k), (v3, k), (v4, k), (v3p, i)))
            branches.append(((v3, i), (v1, k), (v2, k), (v4, k), (v2p, i)))
        return branches
    return None


def _detect_b5(state, v1, cont, fnb):
    if len(cont) != 1 or len(fnb) < 2:
        return None
    (j, _count), = cont.items()
    arms = [arm for arm in _qualifying_arms(state, v1) if arm[2] != j]
    by_part: dict[int, list] = {}
    for arm in arms:
        by_part.setdefault(arm[2], []).append(arm)
    for i in sorted(by_part):
        distinct = []
        seen_anchor = set()
        for arm in by_part[i]:
            if arm[1] not in seen_anchor:
                seen_anchor.add(arm[1])
                distinct.append(arm)
        if len(distinct) < 2:
            continue
        v2, _x, _i, v2p = distinct[0]
        v3, _xp, _i2, v3p = distinct[1]
        branches = [((v1, j),), ((v1, i), (v2, i), (v3, i))]
        for k in state.open_parts(exclude=(i, j)):
            branches.append(((v1, k), (v2, k), (v3, k), (v2p, i), (v3p, i)))
        return branches
    return None


def _detect_b6(state, v1, cont, fnb):
    if cont or len(fnb) < 4:
        return None
    arms = _qualifying_arms(state, v1)
    by_part: dict[int, list] = {}
    for arm in arms:
        group = by_part.setdefault(arm[2], [])
        if arm[1] not in {g[1] for g in group}:
            group.append(arm)
    parts = sorted(p for p, group in by_part.items() if len(group) >= 2)
    if len(parts) < 2:
        return None
    i, j = parts[0], parts[1]
    (v2, _, _, v2p), (v3, _, _, v3p) = by_part[i][0], by_part[i][1]
    (v4, _, _, v4p), (v5, _, _, v5p) = by_part[j][0], by_part[j][1]
    if len({v2, v3, v4, v5}) != 4:
        return None
    branches = [
        ((v1, i), (v2, i), (v3, i)),
        ((v1, j), (v4, j), (v5, j)),
    ]
    arm_info = {v2: (i, v2p), v3: (i, v3p), v4: (j, v4p), v5: (j, v5p)}
    for k in state.open_parts(exclude=(i, j)):
        branches.append(
            ((v1, k), (v2, k), (v3, k), (v4, k), (v5, k),
             (v2p, i), (v3p, i), (v4p, j), (v5p, j))
        )
        for defector in (v2, v3, v4, v5):
            dpart, _dspare = arm_info[defector]
            moves = [(defector, dpart), (v1, k)]
            for other in (v2, v3, v4, v5):
                if other != defector:
                    opart, ospare = arm_info[other]
                    moves.append((other, k))
                    moves.append((ospare, opart))
            branches.append(tuple(moves))
    return branches


def _detect_b7(state, v1, cont, fnb):
    if len(state.graph.adj[v1]) != 2 or len(cont) != 2 or fnb:
        return None
    a, b = state.graph.adj[v1]
    i, j = state.assign[a], state.assign[b]
    av = [z for z in state.free_neighbors(a) if z != v1]
    bv = [z for z in state.free_neighbors(b) if z != v1]
    if not av or not bv or av[0] == bv[0]:
        return None
    v2, v3 = av[0], bv[0]
    return [((v1, i), (v3, j)), ((v1, j), (v2, i))]


def _detect_b8(state, v1, cont, fnb):
    if len(cont) != 1:
        return None
    (i, _count), = cont.items()
    anchors = [
        u for u in state.graph.adj[v1]
        if state.assign[u] == i and any(z != v1 for z in state.free_neighbors(u))
    ]
    if not anchors:
        return None
    a = anchors[0]
    v2 = min(z for z in state.free_neighbors(a) if z != v1)
    contacted = [u for u in fnb if state.part_contacts(u)]
    if not contacted:
        return None
    v3 = contacted[0]
    branches = [((v1, i),)]
    for k in state.open_parts(exclude=(i,)):
        branches.append(((v1, k), (v3, k), (v2, i)))
    return branches


_DETECTORS = (
    ("B1", _detect_b1),
    ("B2", _detect_b2),
    ("B3", _detect_b3),
    ("B4", _detect_b4),
    ("B4'", _detect_b4prime),
    ("B5", _detect_b5),
    ("B6", _detect_b6),
    ("B7", _detect_b7),
    ("B8", _detect_b8),
)


def _completion(state: PartialState) -> PartialState | None:
    """Closing assignment: each part absorbs the free neighborhoods of its
    busy vertices, second-order free vertices follow, and the remainder
    joins the last part.  Returns the completed state only when its
    canonical form certifies the target part count."""
    graph = state.graph
    labels = state.assign[:]
    claimed = [False] * graph.n
    fprime: list[list[int]] = [[] for _ in range(state.used)]
    for i in range(state.used):
        busy = [
            v for v in range(graph.n)
            if labels[v] == i and len(state.free_neighbors(v)) >= 2
        ]
        for v in busy:
            for z in state.free_neighbors(v):
                if not claimed[z]:
                    claimed[z] = True
                    labels[z] = i
                    fprime[i].append(z)
    for i in range(state.used):
        members = set(fprime[i])
        for v in range(graph.n):
            if labels[v] != FREE or claimed[v]:
                continue
            if sum(1 for u in graph.adj[v] if u in members) >= 2:
                claimed[v] = True
                labels[v] = i
    last = state.ell - 1
    for v in range(graph.n):
        if labels[v] == FREE:
            labels[v] = last
    if _crossing_violation(graph, labels) is not None:
        return None
    if canonicalize(graph, labels).p < state.ell:
        return None
    out = state.copy()
    out.assign = labels
    out.free_count = 0
    out.used = len(set(labels))
    return out


def select_branch(state: PartialState) -> list[PartialState]:
    """Children of a reduced, alive, not-fully-assigned state.

    Priority: pendant pre-branch, then the first applicable configuration
    among B1-B8/B4' scanning candidate vertices in ascending id, then the
    closing assignment, then an exhaustive branch on the lowest free vertex.
    """
    return _select_branch_named(state)[1]


def _select_branch_named(state: PartialState) -> tuple[str, list[PartialState]]:
    graph = state.graph
    # Pendant pre-branch: join the host's part or open a singleton part.
    for u in range(graph.n):
        if state.assign[u] == FREE and len(graph.adj[u]) == 1:
            w = graph.adj[u][0]
            if state.assign[w] != FREE and state.assign[w] >= state.frozen:
                moves = []
                if state.used < state.ell:
                    moves.append(((u, state.used),))
                moves.append(((u, state.assign[w]),))
                return "pendant", _children(state, moves)
    for _rule, detector in _DETECTORS:
        for v1 in range(graph.n):
            if state.assign[v1] != FREE:
                continue
            cont = state.part_contacts(v1)
            fnb = state.free_neighbors(v1)
            branches = detector(state, v1, cont, fnb)
            if branches is not None:
                return _rule, _children(state, branches)
    completed = _completion(state)
    if completed is not None:
        return "completion", [completed]
    # Fallback: exhaustive branch keeps the engine complete when no
    # configuration matches and the closing assignment fails.
    v1 = min(state.free_vertices())
    cont = state.part_contacts(v1)
    if len(cont) >= 2:
        candidates = sorted(cont)
    else:
        candidates = state.open_parts()
    return "fallback", _children(state, [((v1, p),) for p in candidates])


def branch_rule_of(state: PartialState) -> str | None:
    """Name of the first applicable B-configuration, for tests and traces."""
    for rule, detector in _DETECTORS:
        for v1 in range(state.graph.n):
            if state.assign[v1] != FREE:
                continue
            branches = detector(
                state, v1, state.part_contacts(v1), state.free_neighbors(v1)
            )
            if branches is not None:
                return rule
    return None


class _SearchStats:
    __slots__ = ("nodes",)

    def __init__(self):
        self.nodes = 0


def _search(
    state: PartialState, stats: _SearchStats, trace_path: list | None = None
) -> list[int] | None:
    stats.nodes += 1
    mark = len(trace_path) if trace_path is not None else 0
    reduced, trace = apply_reduction_rules(state)
    if trace_path is not None:
        trace_path.extend(trace.applications)
    if reduced is None or reduced.used + reduced.free_count < reduced.ell:
        if trace_path is not None:
            del trace_path[mark:]
        return None
    if reduced.free_count == 0:
        if canonicalize(reduced.graph, reduced.assign).p >= reduced.ell:
            return reduced.assign
        if trace_path is not None:
            del trace_path[mark:]
        return None
    rule, children = _select_branch_named(reduced)
    for child in children:
        child_mark = len(trace_path) if trace_path is not None else 0
        if trace_path is not None:
            moves = tuple(
                (v, child.assign[v])
                for v in range(child.graph.n)
                if child.assign[v] != reduced.assign[v]
            )
            trace_path.append((rule, moves))
        if child.free_count == 0:
            if canonicalize(child.graph, child.assign).p >= child.ell:
                return child.assign
            if trace_path is not None:
                del trace_path[child_mark:]
            continue
        result = _search(child, stats, trace_path)
        if result is not None:
            return result
        if trace_path is not None:
            del trace_path[child_mark:]
    if trace_path is not None:
        del trace_path[mark:]
    return None


def _seed_state(graph: Graph, ell: int) -> PartialState | None:
    """Initial state: isolated vertices and a prefix of the pendant
    vertices become pinned singleton parts, then the lowest unassigned
    vertex breaks the remaining part symmetry.

    Pinning pendants is lossless while fewer than ell of them are pinned
    and their attachment vertices are pairwise distinct: any witness can be
    rearranged so that each pinned pendant forms its own part (isolating a
    pendant only frees its neighbor's budget).
    """
    state = PartialState(graph, ell)
    seeds = [v for v in range(graph.n) if graph.degree(v) == 0]
    taken_hosts: set[int] = set()
    for v in range(graph.n):
        if graph.degree(v) == 1:
            host = graph.adj[v][0]
            if host not in taken_hosts:
                taken_hosts.add(host)
                seeds.append(v)
    for v in seeds[: ell - 1]:
        if not state.assign_vertex(v, state.used):
            return None
    # The rearranged witness keeps each seed part a singleton, so no other
    # vertex may ever join one.
    state.frozen = state.used
    if state.free_count:
        v0 = min(state.free_vertices())
        if not state.assign_vertex(v0, state.used):
            return None
    return state


def solve_decision(
    graph: Graph,
    ell: int,
    stats_out: dict | None = None,
    trace_out: list | None = None,
) -> Multicut | None:
    """Witness canonical multicut with at least ``ell`` parts, or None.

    Exhaustive and correct for arbitrary graphs; pendant vertices are
    handled by the dedicated pre-branch and the singleton pre-seeding
    rather than the delta >= 2 assumption of the core rule set.
    ``trace_out`` collects the (rule, assignments) journal of the
    successful search path.
    """
    if stats_out is not None:
        stats_out["nodes"] = 0
    if ell < 1:
        raise ValueError("ell must be positive")
    if graph.n == 0 or ell > graph.n:
        return None
    if len(graph.components()) >= ell:
        # Every component is a part of the cutless multicut.
        from .cuts import max_parts_of_cut

        return max_parts_of_cut(graph, [])
    state = _seed_state(graph, ell)
    stats = _SearchStats()
    labels = (
        _search(state, stats, trace_out) if state is not None else None
    )
    if stats_out is not None:
        stats_out["nodes"] = stats.nodes
    if labels is None:
        return None
    cut = canonicalize(graph, labels)
    assert cut.p >= ell
    return cut


def solve_max(graph: Graph) -> tuple[int, Multicut]:
    """Maximum part count and a witness, by descending decision calls."""
    if graph.n == 0:
        return 0, Multicut((), 0, frozenset())
    for ell in range(graph.n, 0, -1):
        cut = solve_decision(graph, ell)
        if cut is not None:
            return ell, cut
    raise AssertionError("a non-empty graph always has a 1-part multicut")
