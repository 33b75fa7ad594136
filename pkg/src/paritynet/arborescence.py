"""Parity graphs and minimum-weight spanning arborescences.

The parity graph of a column ``y`` is the complete digraph on ``support(y)``
where arc ``i -> j`` costs ``h(P_i ^ P_j) - h(P_j)``: the change in table
weight caused by the row addition ``P_j ^= P_i``. Weights may be negative.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .gf2 import InvalidOperation, ParityTable

MAX_ENUMERATION_VERTICES = 7


@dataclass(frozen=True)
class ParityGraph:
    vertices: tuple[int, ...]
    weights: Mapping[tuple[int, int], int]

    def weight(self, i: int, j: int) -> int:
        return self.weights[(i, j)]

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.vertices for j in self.vertices if i != j]


@dataclass(frozen=True)
class Arborescence:
    root: int
    parent: Mapping[int, int] = field(default_factory=dict)

    @property
    def vertices(self) -> list[int]:
        return sorted({self.root, *self.parent})

    @property
    def arcs(self) -> list[tuple[int, int]]:
        """Arcs ``(parent, child)``, sorted."""
        return sorted((p, c) for c, p in self.parent.items())

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = {v: [] for v in self.vertices}
        for c, p in self.parent.items():
            kids[p].append(c)
        for v in kids:
            kids[v].sort()
        return kids

    def total_weight(self, graph: ParityGraph) -> int:
        return sum(graph.weight(p, c) for c, p in self.parent.items())

    def is_valid(self, vertices: Sequence[int] | None = None) -> bool:
        expected = set(self.vertices if vertices is None else vertices)
        if self.root not in expected or set(self.parent) != expected - {self.root}:
            return False
        for v in self.parent:
            seen = set()
            while v != self.root:
                if v in seen or v not in self.parent:
                    return False
                seen.add(v)
                v = self.parent[v]
        return all(p in expected for p in self.parent.values())


def parity_graph_from_rows(vertices: Sequence[int], rows: np.ndarray) -> ParityGraph:
    """Parity graph on ``vertices`` given their table rows (same order).

    Uses ``h(P_i ^ P_j) - h(P_j) = h(P_i) - 2 |P_i & P_j|`` so all pairwise
    weights come out of a single Gram matrix.
    """
    vertices = tuple(vertices)
    if len(vertices) == 1:
        return ParityGraph(vertices, {})
    r = rows.astype(np.float64)
    overlap = r @ r.T
    h = r.sum(axis=1)
    w = (h[:, None] - 2.0 * overlap).astype(np.int64)
    weights = {
        (vi, vj): int(w[a, b])
        for a, vi in enumerate(vertices)
        for b, vj in enumerate(vertices)
        if a != b
    }
    return ParityGraph(vertices, weights)


def build_parity_graph(table: ParityTable, column: int) -> ParityGraph:
    """Parity graph of column ``column`` (0-based) with weights over the whole table."""
    y = table.bits[:, column]
    verts = [int(i) + 1 for i in np.flatnonzero(y)]
    if not verts:
        raise InvalidOperation(f"column {column} is the zero parity")
    return parity_graph_from_rows(verts, table.bits[np.array(verts) - 1])


# ---------------------------------------------------------- Edmonds / Tarjan


def _min_branching(nodes: list[int], root: int, weight: dict[tuple[int, int], int]) -> dict[int, int]:
    """Minimum spanning arborescence rooted at ``root`` (Chu-Liu/Edmonds).

    ``weight`` maps every available arc ``(u, v)``; returns ``{v: u}``.
    Cheapest incoming arcs are picked with ties going to the smallest source.
    """
    incoming: dict[int, list[tuple[int, int]]] = {v: [] for v in nodes}
    for (u, v), w in weight.items():
        if v != root:
            incoming[v].append((w, u))
    best: dict[int, int] = {}
    for v in nodes:
        if v == root:
            continue
        if not incoming[v]:
            raise InvalidOperation(f"vertex {v} is unreachable")
        best[v] = min(incoming[v])[1]

    cycle = _find_cycle(best, nodes)
    if cycle is None:
        return best

    in_cycle = set(cycle)
    merged = max(nodes) + 1
    cycle_in = {v: weight[(best[v], v)] for v in cycle}
    new_weight: dict[tuple[int, int], int] = {}
    entry: dict[tuple[int, int], tuple[int, int]] = {}
    for (u, v), w in sorted(weight.items()):
        if u in in_cycle and v in in_cycle:
            continue
        if v in in_cycle:
            key, w = (u, merged), w - cycle_in[v]
        elif u in in_cycle:
            key = (merged, v)
        else:
            key = (u, v)
        if key not in new_weight or w < new_weight[key]:
            new_weight[key] = w
            entry[key] = (u, v)

    sub_nodes = [v for v in nodes if v not in in_cycle] + [merged]
    sub = _min_branching(sub_nodes, root, new_weight)

    result: dict[int, int] = {}
    for v, u in sub.items():
        ou, ov = entry[(u, v)]
        result[ov] = ou
    for v in cycle:
        result.setdefault(v, best[v])
    return result


def _find_cycle(parent: dict[int, int], nodes: list[int]) -> list[int] | None:
    state: dict[int, int] = {}
    for start in nodes:
        path = []
        v = start
        while v in parent and state.get(v) is None:
            state[v] = start
            path.append(v)
            v = parent[v]
        if v in parent and state.get(v) == start:
            return path[path.index(v):]
    return None


def min_weight_spanning_arborescence(graph: ParityGraph) -> Arborescence:
    """Minimum-weight spanning arborescence over every possible root.

    A virtual root is attached to each vertex with an arc heavier than any real
    arborescence, so exactly one virtual arc survives and fixes the root. Virtual
    arc weights grow with the vertex index, which makes the lowest-index root win
    among equal-weight optima.
    """
    verts = list(graph.vertices)
    if not verts:
        raise InvalidOperation("empty vertex set")
    if len(verts) == 1:
        return Arborescence(verts[0], {})
    scale = len(verts) + 1
    heavy = (sum(abs(w) for w in graph.weights.values()) + 1) * scale
    virtual = min(verts) - 1
    weight = {arc: w * scale for arc, w in graph.weights.items()}
    for rank, v in enumerate(verts):
        weight[(virtual, v)] = heavy + rank
    branching = _min_branching([virtual, *verts], virtual, weight)
    (root,) = [v for v, p in branching.items() if p == virtual]
    return Arborescence(root, {v: p for v, p in branching.items() if p != virtual})


def enumerate_arborescences(vertices: Sequence[int]) -> Iterator[Arborescence]:
    """Every spanning arborescence of the complete digraph on ``vertices`` (test oracle)."""
    verts = sorted(vertices)
    if len(verts) > MAX_ENUMERATION_VERTICES:
        raise InvalidOperation(
            f"refusing to enumerate arborescences on {len(verts)} > {MAX_ENUMERATION_VERTICES} vertices"
        )
    if not verts:
        return
    for root in verts:
        others = [v for v in verts if v != root]
        choices = [[p for p in verts if p != v] for v in others]
        for parents in itertools.product(*choices):
            arb = Arborescence(root, dict(zip(others, parents)))
            if arb.is_valid(verts):
                yield arb


def traversal_sequence(arb: Arborescence) -> list[tuple[int, int]]:
    """``(vertex, parent)`` pairs in depth-first postorder, children in ascending order.

    Each pair ``(i, j)`` stands for ``CNOT(i, j)`` and the row addition ``P_i ^= P_j``.
    """
    kids = arb.children()
    out: list[tuple[int, int]] = []
    stack = [(arb.root, iter(kids[arb.root]))]
    while stack:
        v, it = stack[-1]
        child = next(it, None)
        if child is None:
            stack.pop()
            if v != arb.root:
                out.append((v, arb.parent[v]))
        else:
            stack.append((child, iter(kids[child])))
    return out


def tree_arborescence(edges, root: int) -> Arborescence:
    """Orient an undirected tree away from ``root``."""
    adj: dict[int, list[int]] = {root: []}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent: dict[int, int] = {}
    stack = [root]
    seen = {root}
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                parent[v] = u
                stack.append(v)
    return Arborescence(root, parent)
