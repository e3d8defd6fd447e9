"""Dynamic programming over nice tree decompositions for maximum parts.

The table at node t is indexed by (P, Ext): P maps each bag vertex to the
smallest-labeled bag vertex in its part, Ext gives the exact number (0 or 1)
of already-realized crossing neighbors of each bag vertex within the
subgraph below t.  Entries that cannot arise are simply absent, which plays
the role of minus infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import Graph


class TreeDecompositionError(ValueError):
    pass


@dataclass
class TreeDecomposition:
    """Tree over node ids with a bag (vertex set) per node."""

    n: int  # vertices of the decomposed graph
    bags: dict[int, frozenset[int]]
    edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=1) - 1

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {t: [] for t in self.bags}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def validate(self, graph: Graph) -> None:
        """Check bag coverage of edges and connectivity of vertex bag-sets."""
        if graph.n != self.n:
            raise TreeDecompositionError(
                f"decomposition is for {self.n} vertices, graph has {graph.n}"
            )
        adj = self.neighbors()
        if self.bags and len(self.edges) != len(self.bags) - 1:
            raise TreeDecompositionError("decomposition tree is not a tree")
        for u, v in graph.edges():
            if not any(u in bag and v in bag for bag in self.bags.values()):
                raise TreeDecompositionError(f"edge ({u + 1}, {v + 1}) not covered")
        for v in range(graph.n):
            nodes = [t for t, bag in self.bags.items() if v in bag]
            if not nodes:
                raise TreeDecompositionError(f"vertex {v + 1} appears in no bag")
            seen = {nodes[0]}
            stack = [nodes[0]]
            inside = set(nodes)
            while stack:
                t = stack.pop()
                for s in adj[t]:
                    if s in inside and s not in seen:
                        seen.add(s)
                        stack.append(s)
            if len(seen) != len(nodes):
                raise TreeDecompositionError(
                    f"bags containing vertex {v + 1} are disconnected"
                )


LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # sorted
    vertex: int = -1  # introduced / forgotten vertex
    children: list["NiceNode"] = field(default_factory=list)


@dataclass
class NiceTreeDecomposition:
    n: int
    root: NiceNode

    def nodes_postorder(self) -> list[NiceNode]:
        out: list[NiceNode] = []
        stack: list[tuple[NiceNode, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                out.append(node)
            else:
                stack.append((node, True))
                for child in node.children:
                    stack.append((child, False))
        return out

    @property
    def width(self) -> int:
        return max((len(n.bag) for n in self.nodes_postorder()), default=1) - 1

    def validate(self) -> None:
        for node in self.nodes_postorder():
            if node.kind == LEAF:
                if node.bag or node.children:
                    raise TreeDecompositionError("leaf bags must be empty")
            elif node.kind == INTRODUCE:
                (child,) = node.children
                if tuple(sorted(set(child.bag) | {node.vertex})) != node.bag:
                    raise TreeDecompositionError("bad introduce node")
            elif node.kind == FORGET:
                (child,) = node.children
                if tuple(sorted(set(child.bag) - {node.vertex})) != node.bag:
                    raise TreeDecompositionError("bad forget node")
            elif node.kind == JOIN:
                a, b = node.children
                if a.bag != node.bag or b.bag != node.bag:
                    raise TreeDecompositionError("join children must share the bag")
            else:
                raise TreeDecompositionError(f"unknown node kind {node.kind}")
        if self.root.bag:
            raise TreeDecompositionError("root bag must be empty")


def parse_td(text: str) -> TreeDecomposition:
    """PACE .td format: 's td N width+1 n' header, 'b i v...' bag lines,
    then tree edges between bag ids (all 1-based)."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise TreeDecompositionError(f"line {lineno}: bad solution line")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            idx = int(parts[1])
            bags[idx - 1] = frozenset(int(x) - 1 for x in parts[2:])
        else:
            if len(parts) != 2:
                raise TreeDecompositionError(f"line {lineno}: bad edge line")
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if header is None:
        raise TreeDecompositionError("missing 's td' header")
    num_bags, _width_plus, n = header
    if len(bags) != num_bags:
        raise TreeDecompositionError(
            f"header declares {num_bags} bags, found {len(bags)}"
        )
    for idx, bag in bags.items():
        if any(not 0 <= v < n for v in bag):
            raise TreeDecompositionError(f"bag {idx + 1} references invalid vertex")
    return TreeDecomposition(n, bags, edges)


def write_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for idx in sorted(td.bags):
        lines.append(
            "b " + " ".join([str(idx + 1)] + [str(v + 1) for v in sorted(td.bags[idx])])
        )
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def heuristic_decomposition(graph: Graph) -> TreeDecomposition:
    """Min-fill elimination ordering; ties broken by vertex id.

    No width guarantee, but exact on trees and chordal graphs.
    """
    n = graph.n
    if n == 0:
        return TreeDecomposition(0, {0: frozenset()}, [])
    nbrs: list[set[int]] = [set(a) for a in graph.adj]
    alive = set(range(n))
    order: list[int] = []
    elim_bag: dict[int, frozenset[int]] = {}
    for _ in range(n):
        best_v, best_fill = -1, None
        for v in sorted(alive):
            live = nbrs[v] & alive
            fill = 0
            live_list = sorted(live)
            for i, a in enumerate(live_list):
                na = nbrs[a]
                for b in live_list[i + 1:]:
                    if b not in na:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        live = sorted(nbrs[best_v] & alive)
        for i, a in enumerate(live):
            for b in live[i + 1:]:
                nbrs[a].add(b)
                nbrs[b].add(a)
        elim_bag[best_v] = frozenset([best_v] + live)
        order.append(best_v)
        alive.discard(best_v)
    pos = {v: i for i, v in enumerate(order)}
    bags = {i: elim_bag[v] for i, v in enumerate(order)}
    edges = []
    roots = []
    for i, v in enumerate(order):
        later = [u for u in elim_bag[v] if u != v]
        if later:
            parent = min(later, key=lambda u: pos[u])
            edges.append((i, pos[parent]))
        else:
            roots.append(i)
    # Chain component roots together so the decomposition is a single tree.
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    td = TreeDecomposition(n, bags, edges)
    td.validate(graph)
    return td


def nicify(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Expand into leaf/introduce/forget/join nodes with empty root and
    leaf bags, preserving the width."""
    if not td.bags:
        return NiceTreeDecomposition(td.n, NiceNode(LEAF, ()))
    adj = td.neighbors()
    root_id = min(td.bags)

    def intro_chain_up(target: tuple[int, ...]) -> NiceNode:
        # Build target bag from the empty leaf by introductions.
        node = NiceNode(LEAF, ())
        bag: list[int] = []
        for v in sorted(target):
            bag.append(v)
            node = NiceNode(INTRODUCE, tuple(sorted(bag)), v, [node])
        return node

    def morph(node: NiceNode, target: tuple[int, ...]) -> NiceNode:
        # Forget extras, then introduce the missing vertices.
        cur = set(node.bag)
        tgt = set(target)
        for v in sorted(cur - tgt):
            cur.discard(v)
            node = NiceNode(FORGET, tuple(sorted(cur)), v, [node])
        for v in sorted(tgt - cur):
            cur.add(v)
            node = NiceNode(INTRODUCE, tuple(sorted(cur)), v, [node])
        return node

    def build(t: int, parent: int) -> NiceNode:
        bag = tuple(sorted(td.bags[t]))
        children = [build(s, t) for s in adj[t] if s != parent]
        if not children:
            return intro_chain_up(bag)
        shaped = [morph(c, bag) for c in children]
        node = shaped[0]
        for other in shaped[1:]:
            node = NiceNode(JOIN, bag, -1, [node, other])
        return node

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * len(td.bags) + 100))
    try:
        top = build(root_id, -1)
    finally:
        sys.setrecursionlimit(old_limit)
    top = morph(top, ())
    ntd = NiceTreeDecomposition(td.n, top)
    ntd.validate()
    return ntd


# ---------------------------------------------------------------------------
# The DP proper.  Keys are (P, Ext) with P a tuple of representatives
# aligned with the sorted bag and Ext a tuple of 0/1 flags.


def _check_key(bag: tuple[int, ...], reps: tuple[int, ...]) -> None:
    rep_of = dict(zip(bag, reps))
    for v, r in zip(bag, reps):
        assert r <= v, "representative must not exceed its vertex"
        assert rep_of[r] == r, "representatives must be idempotent"


def _bag_cross_counts(graph: Graph, bag, reps) -> list[int] | None:
    """Crossing neighbors inside the bag per bag vertex; None if some vertex
    already exceeds one crossing (the whole P is infeasible)."""
    rep_of = dict(zip(bag, reps))
    counts = []
    for v in bag:
        c = 0
        for u in graph.adj[v]:
            if u in rep_of and rep_of[u] != rep_of[v]:
                c += 1
        if c > 1:
            return None
        counts.append(c)
    return counts


def transfer_leaf() -> dict:
    return {((), ()): 0}


def transfer_introduce(
    graph: Graph, child_bag: tuple[int, ...], table: dict, v: int
) -> dict:
    """Place v into a new singleton part (+1) or into an existing bag part."""
    bag = tuple(sorted(set(child_bag) | {v}))
    vpos = bag.index(v)
    out: dict = {}
    vadj = set(graph.adj[v])
    for (creps, cext), value in table.items():
        crep_of = dict(zip(child_bag, creps))
        cext_of = dict(zip(child_bag, cext))
        # Candidate targets: fresh singleton, or one of the child's parts.
        targets = [None] + sorted(set(creps))
        for target in targets:
            if target is None:
                rep = v
            else:
                rep = min(v, target)
            new_rep_of = {
                u: (rep if target is not None and crep_of[u] == target else crep_of[u])
                for u in child_bag
            }
            new_rep_of[v] = rep
            # Ext update: every bag edge at v realizes now.
            ext_of = dict(cext_of)
            vcross = 0
            feasible = True
            for u in child_bag:
                if u in vadj and new_rep_of[u] != new_rep_of[v]:
                    vcross += 1
                    if vcross > 1 or ext_of[u] >= 1:
                        feasible = False
                        break
                    ext_of[u] += 1
            if not feasible:
                continue
            ext_of[v] = vcross
            reps = tuple(new_rep_of[u] for u in bag)
            ext = tuple(ext_of[u] for u in bag)
            _check_key(bag, reps)
            gain = 1 if target is None else 0
            key = (reps, ext)
            cand = value + gain
            if out.get(key, -1) < cand:
                out[key] = cand
    return out


def transfer_forget(child_bag: tuple[int, ...], table: dict, v: int) -> dict:
    """Project out v, re-rooting its part to the minimum remaining member
    and maximizing over v's own Ext bit."""
    bag = tuple(u for u in child_bag if u != v)
    out: dict = {}
    for (creps, cext), value in table.items():
        crep_of = dict(zip(child_bag, creps))
        vrep = crep_of[v]
        survivors = [u for u in bag if crep_of[u] == vrep]
        if survivors:
            new_root = min(survivors)
        else:
            new_root = None  # the part closes below this node
        reps = tuple(
            (new_root if crep_of[u] == vrep else crep_of[u]) for u in bag
        )
        ext = tuple(e for u, e in zip(child_bag, cext) if u != v)
        _check_key(bag, reps)
        key = (reps, ext)
        if out.get(key, -1) < value:
            out[key] = value
    return out


def transfer_join(graph: Graph, bag: tuple[int, ...], left: dict, right: dict) -> dict:
    """Combine children sharing the bag; overlap parts are counted twice so
    the number of distinct representatives is subtracted."""
    by_p_left: dict[tuple, list] = {}
    for (reps, ext), value in left.items():
        by_p_left.setdefault(reps, []).append((ext, value))
    by_p_right: dict[tuple, list] = {}
    for (reps, ext), value in right.items():
        by_p_right.setdefault(reps, []).append((ext, value))
    out: dict = {}
    for reps, lefts in by_p_left.items():
        rights = by_p_right.get(reps)
        if rights is None:
            continue
        counts = _bag_cross_counts(graph, bag, reps)
        if counts is None:
            continue
        x = len(set(reps))
        for ext1, v1 in lefts:
            for ext2, v2 in rights:
                ext = []
                ok = True
                for idx in range(len(bag)):
                    b = counts[idx]
                    e1, e2 = ext1[idx], ext2[idx]
                    if b == 1:
                        # The crossing is visible on both sides.
                        if e1 != 1 or e2 != 1:
                            ok = False
                            break
                        ext.append(1)
                    else:
                        hidden = e1 + e2
                        if hidden > 1:
                            ok = False
                            break
                        ext.append(hidden)
                if not ok:
                    continue
                key = (reps, tuple(ext))
                cand = v1 + v2 - x
                if out.get(key, -1) < cand:
                    out[key] = cand
    return out


def max_parts_tw(graph: Graph, ntd: NiceTreeDecomposition) -> int:
    """c[root, empty, empty]: the maximum number of parts of any matching
    multicut of the graph."""
    if graph.n == 0:
        return 0
    tables: dict[int, dict] = {}
    order = ntd.nodes_postorder()
    for node in order:
        if node.kind == LEAF:
            table = transfer_leaf()
        elif node.kind == INTRODUCE:
            child = node.children[0]
            table = transfer_introduce(
                graph, child.bag, tables.pop(id(child)), node.vertex
            )
        elif node.kind == FORGET:
            child = node.children[0]
            table = transfer_forget(child.bag, tables.pop(id(child)), node.vertex)
        else:
            a, b = node.children
            table = transfer_join(
                graph, node.bag, tables.pop(id(a)), tables.pop(id(b))
            )
        bag_size = len(node.bag)
        if bag_size:
            assert len(table) <= (bag_size ** bag_size) * (2 ** bag_size)
        tables[id(node)] = table
    root_table = tables[id(ntd.root)]
    if not root_table:
        return 0
    return root_table[((), ())]
