"""Coupling graphs and their canonical all-pairs shortest paths."""

from __future__ import annotations

import re
from collections import deque
from functools import cached_property
from typing import Iterable


class TopologyError(ValueError):
    pass


class Topology:
    """Connected undirected coupling graph on qubits ``1..n``.

    Canonical shortest paths come from a BFS per source that expands
    neighbours in *descending* index order; ``path(u, v)`` lists vertices
    from ``u`` to ``v`` inclusive.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], name: str | None = None):
        if n < 1:
            raise TopologyError("topology needs at least one vertex")
        norm: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise TopologyError(f"self-loop on vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise TopologyError(f"edge ({u}, {v}) outside 1..{n}")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise TopologyError(f"duplicate edge {e}")
            norm.add(e)
        self.n = n
        self.edges = frozenset(norm)
        self.name = name or f"graph:{n}"
        adj: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        comps = self.components()
        if len(comps) > 1:
            raise TopologyError(
                "graph is disconnected; components: " + "; ".join(str(sorted(c)) for c in comps)
            )

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        comps = []
        for s in range(1, self.n + 1):
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if v not in comp:
                        comp.add(v)
                        queue.append(v)
            seen |= comp
            comps.append(comp)
        return comps

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @cached_property
    def _bfs_parents(self) -> list[list[int]]:
        parents = [[0] * (self.n + 1) for _ in range(self.n + 1)]
        for s in range(1, self.n + 1):
            par = parents[s]
            par[s] = s
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in reversed(self.adjacency[u]):
                    if not par[v]:
                        par[v] = u
                        queue.append(v)
        return parents

    @cached_property
    def paths(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out = {}
        for u in range(1, self.n + 1):
            par = self._bfs_parents[u]
            for v in range(1, self.n + 1):
                p = [v]
                while p[-1] != u:
                    p.append(par[p[-1]])
                out[(u, v)] = tuple(reversed(p))
        return out

    @cached_property
    def dist(self) -> list[list[int]]:
        d = [[0] * (self.n + 1) for _ in range(self.n + 1)]
        for (u, v), p in self.paths.items():
            d[u][v] = len(p) - 1
        return d

    def path(self, u: int, v: int) -> tuple[int, ...]:
        return self.paths[(u, v)]

    def distance(self, u: int, v: int) -> int:
        return self.dist[u][v]

    def __repr__(self) -> str:
        return f"Topology({self.name}, n={self.n}, edges={len(self.edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Topology):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))


def all_pairs_shortest_paths(g: Topology) -> dict[tuple[int, int], tuple[int, ...]]:
    return g.paths


def grid(w: int, h: int) -> Topology:
    """``w`` columns by ``h`` rows, numbered row-major from 1."""
    if w < 1 or h < 1 or w * h < 2:
        raise TopologyError(f"degenerate grid {w}x{h}")
    edges = []
    for r in range(h):
        for c in range(w):
            v = r * w + c + 1
            if c + 1 < w:
                edges.append((v, v + 1))
            if r + 1 < h:
                edges.append((v, v + w))
    return Topology(w * h, edges, name=f"grid:{w}x{h}")


def line(n: int) -> Topology:
    if n < 2:
        raise TopologyError(f"line needs n >= 2, got {n}")
    return Topology(n, [(i, i + 1) for i in range(1, n)], name=f"line:{n}")


def ring(n: int) -> Topology:
    if n < 3:
        raise TopologyError(f"ring needs n >= 3, got {n}")
    return Topology(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)], name=f"ring:{n}")


def complete(n: int) -> Topology:
    if n < 2:
        raise TopologyError(f"complete graph needs n >= 2, got {n}")
    return Topology(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], name=f"complete:{n}")


def from_edge_list(text: str, name: str | None = None) -> Topology:
    """Parse a ``.graph`` file: ``n <count>`` then ``u v`` per line, ``#`` comments."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line_ = raw.split("#", 1)[0].strip()
        if not line_:
            continue
        fields = line_.split()
        if n is None:
            if len(fields) != 2 or fields[0] != "n":
                raise TopologyError(f"line {lineno}: expected 'n <count>'")
            try:
                n = int(fields[1])
            except ValueError:
                raise TopologyError(f"line {lineno}: bad vertex count {fields[1]!r}") from None
            continue
        if len(fields) != 2:
            raise TopologyError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise TopologyError(f"line {lineno}: non-integer vertex in {line_!r}") from None
        if u == v:
            raise TopologyError(f"line {lineno}: self-loop on vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise TopologyError(f"line {lineno}: edge ({u}, {v}) outside 1..{n}")
        edges.append((u, v))
    if n is None:
        raise TopologyError("missing 'n <count>' header")
    return Topology(n, edges, name=name or f"file:{n}")


def format_edge_list(g: Topology) -> str:
    return f"n {g.n}\n" + "".join(f"{u} {v}\n" for u, v in sorted(g.edges))


_ARCH = re.compile(r"^(grid):(\d+)x(\d+)$|^(line|ring|complete):(\d+)$|^file:(.+)$")


def parse_arch(spec: str) -> Topology:
    """``grid:3x3``, ``line:5``, ``ring:6``, ``complete:9`` or ``file:<path>``."""
    m = _ARCH.match(spec.strip())
    if not m:
        raise TopologyError(f"unrecognised architecture {spec!r}")
    if m.group(1):
        return grid(int(m.group(2)), int(m.group(3)))
    if m.group(4):
        kind, size = m.group(4), int(m.group(5))
        return {"line": line, "ring": ring, "complete": complete}[kind](size)
    path = m.group(6)
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(fh.read(), name=f"file:{path}")
