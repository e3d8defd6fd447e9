"""Matching multicut representation, validation and canonicalization.

A matching multicut of G on at least ell parts is a partition of V(G) such
that every vertex has at most one neighbor outside its own part.  The
canonical form used throughout this package refines every part into its
connected components and numbers parts by their smallest vertex, which makes
solutions comparable and enumeration streams deduplicatable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graphs import Graph

Edge = tuple[int, int]


@dataclass(frozen=True)
class ViolationReport:
    """Typed reason why a partition is not a matching multicut."""

    kind: str  # vertex-two-crossing | disconnected-part | empty-part | too-few-parts
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}: witness {self.witness}"


@dataclass(frozen=True)
class Multicut:
    """Canonical matching multicut: connected parts plus the crossing edges.

    ``part_of[v]`` is the part index of v, parts are numbered by smallest
    contained vertex, and ``cut_edges`` is exactly the set of edges whose
    endpoints lie in different parts (always a matching).
    """

    part_of: tuple[int, ...]
    p: int
    cut_edges: frozenset[Edge]

    @property
    def parts(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.p)]
        for v, i in enumerate(self.part_of):
            out[i].append(v)
        return tuple(tuple(part) for part in out)

    def to_json(self) -> str:
        """One-line JSON with 1-based vertex ids."""
        parts = [[v + 1 for v in part] for part in self.parts]
        cuts = sorted([u + 1, v + 1] for u, v in self.cut_edges)
        return json.dumps({"parts": parts, "cut_edges": cuts}, separators=(",", ":"))

    def to_text(self) -> str:
        """'part i: v1 v2 ...' lines with 1-based vertex ids."""
        lines = []
        for i, part in enumerate(self.parts, start=1):
            lines.append(f"part {i}: " + " ".join(str(v + 1) for v in part))
        return "\n".join(lines) + "\n"

    def check(self, graph: Graph, ell: int = 1) -> ViolationReport | None:
        """Verify every Multicut invariant against ``graph``, including
        part connectivity and exactness of ``cut_edges``."""
        report = validate_multicut(graph, self.part_of, ell)
        if report is not None:
            return report
        expected = crossing_edges(graph, self.part_of)
        if expected != self.cut_edges:
            bad = tuple(sorted(expected.symmetric_difference(self.cut_edges)))[0]
            return ViolationReport("vertex-two-crossing", bad)
        for part in self.parts:
            if not _is_connected_subset(graph, part):
                return ViolationReport("disconnected-part", tuple(part))
        return None


def crossing_edges(graph: Graph, part_of: Sequence[int]) -> frozenset[Edge]:
    out = set()
    for u in range(graph.n):
        pu = part_of[u]
        for v in graph.adj[u]:
            if u < v and part_of[v] != pu:
                out.add((u, v))
    return frozenset(out)


def _is_connected_subset(graph: Graph, vertices: Sequence[int]) -> bool:
    if not vertices:
        return False
    inside = set(vertices)
    stack = [vertices[0]]
    seen = {vertices[0]}
    while stack:
        v = stack.pop()
        for u in graph.adj[v]:
            if u in inside and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(inside)


def _as_part_list(graph: Graph, part_of) -> list[int]:
    if isinstance(part_of, Mapping):
        missing = [v for v in range(graph.n) if v not in part_of]
        if missing:
            raise ValueError(f"part assignment missing vertices {missing}")
        return [part_of[v] for v in range(graph.n)]
    lst = list(part_of)
    if len(lst) != graph.n:
        raise ValueError("part assignment must cover every vertex")
    return lst


def _crossing_violation(graph: Graph, labels: Sequence[int]) -> ViolationReport | None:
    for v in range(graph.n):
        pv = labels[v]
        outside = 0
        for u in graph.adj[v]:
            if labels[u] != pv:
                outside += 1
                if outside > 1:
                    return ViolationReport("vertex-two-crossing", (v,))
    return None


def validate_multicut(graph: Graph, part_of, ell: int) -> ViolationReport | None:
    """Check the matching multicut conditions for a part assignment.

    Returns None when every vertex has at most one neighbor outside its own
    part, all referenced parts are non-empty and at least ``ell`` parts are
    used.  Part connectivity is deliberately not required here; that is
    canonicalize's job.
    """
    labels = _as_part_list(graph, part_of)
    report = _crossing_violation(graph, labels)
    if report is not None:
        return report
    used = set(labels)
    if used:
        for i in range(max(used) + 1):
            if i not in used:
                return ViolationReport("empty-part", (i,))
    if len(used) < ell:
        return ViolationReport("too-few-parts", (len(used), ell))
    return None


def canonicalize(graph: Graph, part_of) -> Multicut:
    """Refine each part into connected components and renumber by smallest
    contained vertex.  Requires the one-crossing-neighbor condition to hold
    for the given assignment (part labels may be arbitrary)."""
    labels = _as_part_list(graph, part_of)
    report = _crossing_violation(graph, labels)
    if report is not None:
        raise ValueError(f"not a matching multicut: {report}")
    # Connected components within each part, discovered in vertex order, are
    # automatically numbered by their smallest member.
    part_index = [-1] * graph.n
    p = 0
    for s in range(graph.n):
        if part_index[s] != -1:
            continue
        part_index[s] = p
        stack = [s]
        while stack:
            v = stack.pop()
            for u in graph.adj[v]:
                if part_index[u] == -1 and labels[u] == labels[v]:
                    part_index[u] = p
                    stack.append(u)
        p += 1
    cuts = crossing_edges(graph, part_index)
    return Multicut(tuple(part_index), p, cuts)


def max_parts_of_cut(graph: Graph, matching: Iterable[Edge]) -> Multicut:
    """Canonical multicut whose parts are the components of G - M.

    ``matching`` must be a matching; edges of M that do not separate their
    endpoints are dropped from cut_edges by canonicalization.
    """
    cut = set()
    saturated = set()
    for u, v in matching:
        if u == v or not graph.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge")
        if u in saturated or v in saturated:
            raise ValueError(f"({u}, {v}) shares an endpoint: not a matching")
        saturated.update((u, v))
        cut.add((u, v) if u < v else (v, u))
    part_index = [-1] * graph.n
    p = 0
    for s in range(graph.n):
        if part_index[s] != -1:
            continue
        part_index[s] = p
        stack = [s]
        while stack:
            v = stack.pop()
            for u in graph.adj[v]:
                edge = (v, u) if v < u else (u, v)
                if part_index[u] == -1 and edge not in cut:
                    part_index[u] = p
                    stack.append(u)
        p += 1
    return Multicut(tuple(part_index), p, crossing_edges(graph, part_index))


def cut_is_multicut(graph: Graph, matching: Iterable[Edge]) -> bool:
    """True iff M is a matching whose edges all separate their endpoints in
    G - M, i.e. M is exactly the crossing set of its component partition."""
    edges = set(matching)
    try:
        cut = max_parts_of_cut(graph, edges)
    except ValueError:
        return False
    return cut.cut_edges == frozenset(
        (u, v) if u < v else (v, u) for u, v in edges
    )
