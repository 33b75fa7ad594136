"""Approximate Steiner trees on a coupling graph and the synthesis cost built on them.

Trees are grown the Takahashi-Matsuyama way: start from the lowest terminal and
repeatedly attach the canonical shortest path from the partial tree to the
nearest uncovered terminal. Ties on path length go to the highest tree vertex,
then the lowest terminal.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .topology import Topology, TopologyError

MAX_EXACT_SUBSETS = 1 << 10


class SteinerError(ValueError):
    pass


@dataclass(frozen=True)
class SteinerTree:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    terminals: frozenset[int]

    @property
    def steiner_nodes(self) -> set[int]:
        return set(self.vertices) - self.terminals

    @property
    def cost(self) -> int:
        """CNOTs needed to synthesise a parity over this tree: ``2|V_T| - |S| - 1``."""
        return 2 * len(self.vertices) - len(self.terminals) - 1

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for v in adj:
            adj[v].sort()
        return adj

    def is_valid(self, g: Topology) -> bool:
        if not self.terminals <= set(self.vertices):
            return False
        if len(self.edges) != len(self.vertices) - 1:
            return False
        if not all(g.has_edge(u, v) for u, v in self.edges):
            return False
        adj = self.neighbors()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


class _Growth:
    """One partially built tree; each :meth:`step` attaches one shortest path."""

    __slots__ = ("g", "terminals", "in_tree", "order", "edges", "remaining", "near")

    def __init__(self, terminals: Iterable[int], g: Topology):
        terms = sorted(set(terminals))
        if not terms:
            raise SteinerError("empty terminal set")
        for t in terms:
            if not 1 <= t <= g.n:
                raise TopologyError(f"unknown vertex {t}")
        self.g = g
        self.terminals = frozenset(terms)
        seed = terms[0]
        self.in_tree = {seed}
        self.order = [seed]
        self.edges: list[tuple[int, int]] = []
        self.remaining = set(terms[1:])
        # remaining terminal -> (distance to tree, -attachment vertex)
        self.near = {v: (g.dist[seed][v], -seed) for v in self.remaining}

    @property
    def done(self) -> bool:
        return not self.remaining

    def step(self) -> int:
        """Attach the next path; return the cost it adds, ``2 * edges - newly covered terminals``."""
        d, neg_u, v = min((dv, nu, v) for v, (dv, nu) in self.near.items())
        path = self.g.path(-neg_u, v)
        added = []
        for a, b in zip(path, path[1:]):
            self.edges.append((min(a, b), max(a, b)))
            if b not in self.in_tree:
                self.in_tree.add(b)
                self.order.append(b)
                added.append(b)
        covered = [x for x in added if x in self.remaining]
        for x in covered:
            self.remaining.discard(x)
            del self.near[x]
        dist = self.g.dist
        for w, (dw, nu) in self.near.items():
            best = (dw, nu)
            for x in added:
                cand = (dist[x][w], -x)
                if cand < best:
                    best = cand
            self.near[w] = best
        return 2 * d - len(covered)

    def tree(self) -> SteinerTree:
        return SteinerTree(tuple(sorted(self.in_tree)), tuple(sorted(self.edges)), self.terminals)


def steiner_tree(terminals: Iterable[int], g: Topology) -> SteinerTree:
    grow = _Growth(terminals, g)
    while not grow.done:
        grow.step()
    return grow.tree()


def cost(terminals: Iterable[int], g: Topology) -> int:
    terms = set(terminals)
    if len(terms) == 1:
        return 0
    return steiner_tree(terms, g).cost


class CostCache:
    """Memoised :func:`cost` keyed by parity key (qubit 1 = most significant bit).

    The cost is a pure function of the support and the topology, so entries stay
    valid across row additions.
    """

    def __init__(self, g: Topology):
        self.g = g
        self._costs: dict[int, int] = {}

    def __call__(self, key: int) -> int:
        c = self._costs.get(key)
        if c is None:
            n = self.g.n
            terms = [q for q in range(1, n + 1) if (key >> (n - q)) & 1]
            c = self._costs[key] = cost(terms, self.g)
        return c

    def __len__(self) -> int:
        return len(self._costs)


def fill_in(tree: SteinerTree) -> list[tuple[int, int]]:
    """CNOT pairs ``(u, v)`` that put every Steiner node into the parity.

    Repeatedly takes the lowest Steiner node that is a leaf of the Steiner-node
    forest and touches a covered vertex, and adds the lowest covered neighbour to it.
    """
    adj = tree.neighbors()
    covered = set(tree.terminals)
    forest = set(tree.vertices) - covered
    pairs = []
    while forest:
        for u in sorted(forest):
            if sum(1 for w in adj[u] if w in forest) > 1:
                continue
            vs = [w for w in adj[u] if w in covered]
            if vs:
                break
        else:
            raise AssertionError(f"no eligible fill-in leaf among {sorted(forest)}")
        pairs.append((u, vs[0]))
        covered.add(u)
        forest.discard(u)
    return pairs


def k_min_steiner_trees(
    sets: Sequence[Iterable[int]], g: Topology, k: int
) -> list[tuple[int, int, SteinerTree]]:
    """The ``k`` cheapest trees among ``sets``, as ``(cost, set index, tree)`` by ascending cost.

    All trees grow simultaneously from a bucket queue keyed by accumulated cost;
    a tree is only extended while its cost is still a candidate, so most trees
    are never completed.
    """
    if k < 1:
        raise SteinerError(f"K must be >= 1, got {k}")
    growths = [_Growth(s, g) for s in sets]
    buckets: dict[int, list[int]] = defaultdict(list)
    buckets[0] = list(reversed(range(len(growths))))
    pending = len(growths)
    level = 0
    out: list[tuple[int, int, SteinerTree]] = []
    while pending:
        stack = buckets.pop(level, None)
        while stack:
            i = stack.pop()
            grow = growths[i]
            if grow.done:
                out.append((level, i, grow.tree()))
                pending -= 1
                if len(out) == k:
                    return out
                continue
            buckets[level + grow.step()].append(i)
        level += 1
    return out


def exact_steiner_edges(terminals: Iterable[int], g: Topology) -> int:
    """Edge count of an optimal Steiner tree, by subset enumeration (test oracle).

    With unit edge weights a minimum spanning tree of a connected induced
    subgraph on ``U`` has ``|U| - 1`` edges, so the optimum is the smallest
    connected ``U`` containing the terminals.
    """
    terms = set(terminals)
    others = [v for v in range(1, g.n + 1) if v not in terms]
    if (1 << len(others)) > MAX_EXACT_SUBSETS:
        raise SteinerError(f"exact Steiner oracle limited to {MAX_EXACT_SUBSETS} subsets")
    for extra in range(len(others) + 1):
        for chosen in itertools.combinations(others, extra):
            nodes = terms | set(chosen)
            start = next(iter(nodes))
            seen = {start}
            stack = [start]
            while stack:
                for w in g.adjacency[stack.pop()]:
                    if w in nodes and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen == nodes:
                return len(nodes) - 1
    raise SteinerError("terminals are not connected")
