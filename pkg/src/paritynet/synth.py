"""Parity network synthesis engines.

Every engine repeats the same two steps until the table is empty: pick a
parity, then emit the CNOTs that bring it onto a single wire while applying the
matching row additions to the rest of the table.

* ``alltoall``: pick the lightest parity, synthesise it along a
  minimum-weight spanning arborescence of its parity graph.
* ``arch``: pick the parity with the cheapest Steiner tree on the coupling
  graph, fill in the Steiner nodes, then orient the tree from the root whose
  truncated sorted cost vector of the remaining parities is smallest.
* ``arch-greedy``: as ``arch`` but always roots the tree at its lowest terminal.

Any engine can restrict parity choice to a sliding window over the live
columns, in input order.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .arborescence import (
    min_weight_spanning_arborescence,
    parity_graph_from_rows,
    traversal_sequence,
    tree_arborescence,
)
from .circuit import Circuit
from .gf2 import ParityTable, column_keys
from .steiner import CostCache, fill_in, k_min_steiner_trees, steiner_tree
from .topology import Topology

MODES = ("alltoall", "arch", "arch-greedy")
COST_VECTOR_METHODS = ("memo", "kmin")


class SynthesisError(ValueError):
    pass


@dataclass(frozen=True)
class SynthesisConfig:
    mode: str = "alltoall"
    window: int | None = None
    k_trunc: int = 10
    topology: Topology | None = None
    cost_vectors: str = "memo"

    def __post_init__(self):
        if self.mode not in MODES:
            raise SynthesisError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.window is not None and self.window < 1:
            raise SynthesisError(f"window must be >= 1, got {self.window}")
        if self.k_trunc < 1:
            raise SynthesisError(f"K must be >= 1, got {self.k_trunc}")
        if self.cost_vectors not in COST_VECTOR_METHODS:
            raise SynthesisError(f"cost_vectors must be one of {COST_VECTOR_METHODS}")
        if self.mode != "alltoall" and self.topology is None:
            raise SynthesisError(f"mode {self.mode!r} needs a topology")


@dataclass
class IterationRecord:
    column: int
    parity: str
    support: list[int]
    tree: list[int]
    root: int
    gates: int


@dataclass
class SynthesisReport:
    circuit: Circuit
    config: SynthesisConfig
    trace: list[IterationRecord] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def cnot_count(self) -> int:
        return self.circuit.cnot_count()

    @property
    def cnot_depth(self) -> int:
        return self.circuit.cnot_depth()

    def metrics(self) -> dict:
        cfg = self.config
        return {
            "mode": cfg.mode,
            "arch": cfg.topology.name if cfg.topology is not None else None,
            "window": cfg.window,
            "k_trunc": cfg.k_trunc,
            "n": self.circuit.n,
            "m": len(self.trace),
            "cnot_count": self.cnot_count,
            "cnot_depth": self.cnot_depth,
            "wall_time_s": self.wall_time,
        }

    def to_dict(self) -> dict:
        return {"metrics": self.metrics(), "trace": [asdict(r) for r in self.trace]}


class _Work:
    """Mutable copy of the table; consumed columns are zeroed so they drop out of every weight."""

    def __init__(self, table: ParityTable):
        self.n = table.n
        self.bits = table.bits.copy()
        self.live = np.ones(table.m, dtype=bool)
        self.weights = self.bits.sum(axis=0, dtype=np.int64)

    def window(self, alpha: int | None) -> np.ndarray:
        cols = np.flatnonzero(self.live)
        return cols if alpha is None else cols[:alpha]

    def take(self, c: int) -> np.ndarray:
        y = self.bits[:, c].copy()
        self.bits[:, c] = 0
        self.weights[c] = 0
        self.live[c] = False
        return y

    def row_add(self, i: int, j: int) -> None:
        row = self.bits[i - 1]
        new = row ^ self.bits[j - 1]
        self.weights += new.astype(np.int64) - row
        self.bits[i - 1] = new


def _lexicographic_min(bits: np.ndarray, cols: np.ndarray) -> int:
    """Column whose parity is the smallest integer (qubit 1 most significant)."""
    keys = column_keys(bits[:, cols])
    return int(cols[min(range(len(cols)), key=keys.__getitem__)])


def _choose_lightest(work: _Work, cands: np.ndarray) -> int:
    w = work.weights[cands]
    tied = cands[w == w.min()]
    return int(tied[0]) if tied.size == 1 else _lexicographic_min(work.bits, tied)


def _choose_cheapest(work: _Work, cands: np.ndarray, costs: CostCache) -> int:
    keys = column_keys(work.bits[:, cands])
    w = work.weights[cands].tolist()
    best = min(range(len(cands)), key=lambda a: (costs(keys[a]), w[a], keys[a]))
    return int(cands[best])


def choose_parity(table: ParityTable, config: SynthesisConfig) -> int:
    """Column (0-based) the engine would synthesise first."""
    if table.m == 0:
        raise SynthesisError("empty parity table")
    work = _Work(table)
    cands = work.window(config.window)
    if config.mode == "alltoall":
        return _choose_lightest(work, cands)
    return _choose_cheapest(work, cands, CostCache(_checked_topology(table, config.topology)))


def _checked_topology(table: ParityTable, g: Topology | None) -> Topology:
    if g is None:
        raise SynthesisError("architecture-aware synthesis needs a topology")
    if g.n != table.n:
        raise SynthesisError(f"topology has {g.n} vertices but the table has {table.n} qubits")
    return g


def _support(y: np.ndarray) -> list[int]:
    return [int(i) + 1 for i in np.flatnonzero(y)]


def synthesize_alltoall(table: ParityTable, window: int | None = None) -> SynthesisReport:
    config = SynthesisConfig("alltoall", window=window)
    start = time.perf_counter()
    work = _Work(table)
    circuit = Circuit(table.n)
    report = SynthesisReport(circuit, config)
    for _ in range(table.m):
        c = _choose_lightest(work, work.window(window))
        y = work.take(c)
        verts = _support(y)
        pairs: list[tuple[int, int]] = []
        root = verts[0]
        if len(verts) > 1:
            graph = parity_graph_from_rows(verts, work.bits[np.array(verts) - 1])
            arb = min_weight_spanning_arborescence(graph)
            root = arb.root
            pairs = traversal_sequence(arb)
            for i, j in pairs:
                circuit.append_cnot(i, j)
                work.row_add(i, j)
        report.trace.append(
            IterationRecord(c, "".join(map(str, y)), verts, verts, root, len(pairs))
        )
    report.wall_time = time.perf_counter() - start
    return report


def _cost_vector(
    work: _Work,
    cols: np.ndarray,
    pairs: list[tuple[int, int]],
    k: int,
    costs: CostCache,
    method: str,
) -> tuple[int, ...]:
    sub = work.bits[:, cols].copy()
    for i, j in pairs:
        np.bitwise_xor(sub[i - 1], sub[j - 1], out=sub[i - 1])
    if method == "kmin":
        sets = [_support(sub[:, a]) for a in range(sub.shape[1])]
        return tuple(c for c, _, _ in k_min_steiner_trees(sets, costs.g, k))
    return tuple(heapq.nsmallest(k, map(costs, column_keys(sub))))


def _synthesize_arch(table: ParityTable, config: SynthesisConfig) -> SynthesisReport:
    g = _checked_topology(table, config.topology)
    greedy = config.mode == "arch-greedy"
    start = time.perf_counter()
    costs = CostCache(g)
    work = _Work(table)
    circuit = Circuit(table.n)
    report = SynthesisReport(circuit, config)
    for _ in range(table.m):
        c = _choose_cheapest(work, work.window(config.window), costs)
        y = work.take(c)
        verts = _support(y)
        tree = steiner_tree(verts, g)
        emitted = 0
        for i, j in fill_in(tree):
            circuit.append_cnot(i, j)
            work.row_add(i, j)
            emitted += 1

        if len(tree.vertices) == 1:
            root = tree.vertices[0]
            pairs: list[tuple[int, int]] = []
        elif greedy:
            root = min(tree.terminals)
            pairs = traversal_sequence(tree_arborescence(tree.edges, root))
        else:
            rest = work.window(config.window)
            best = None
            for r in tree.vertices:
                cand = traversal_sequence(tree_arborescence(tree.edges, r))
                vec = _cost_vector(work, rest, cand, config.k_trunc, costs, config.cost_vectors)
                if best is None or vec < best[0]:
                    best = (vec, r, cand)
            _, root, pairs = best

        for i, j in pairs:
            circuit.append_cnot(i, j)
            work.row_add(i, j)
        emitted += len(pairs)
        report.trace.append(
            IterationRecord(c, "".join(map(str, y)), verts, list(tree.vertices), root, emitted)
        )
    report.wall_time = time.perf_counter() - start
    return report


def synthesize_arch(
    table: ParityTable,
    topology: Topology,
    config: SynthesisConfig | None = None,
) -> SynthesisReport:
    if config is None:
        config = SynthesisConfig("arch", topology=topology)
    elif config.mode != "arch" or config.topology is not topology:
        config = SynthesisConfig("arch", config.window, config.k_trunc, topology, config.cost_vectors)
    return _synthesize_arch(table, config)


def synthesize_arch_greedy(
    table: ParityTable,
    topology: Topology,
    config: SynthesisConfig | None = None,
) -> SynthesisReport:
    window = None if config is None else config.window
    return _synthesize_arch(table, SynthesisConfig("arch-greedy", window=window, topology=topology))


def synthesize(table: ParityTable, config: SynthesisConfig) -> SynthesisReport:
    if config.mode == "alltoall":
        return synthesize_alltoall(table, window=config.window)
    return _synthesize_arch(table, config)


def sliding_window(engine: Callable[..., SynthesisReport], alpha: int) -> Callable[..., SynthesisReport]:
    """Wrap ``synthesize_alltoall``/``synthesize_arch``/``synthesize_arch_greedy`` with a window of ``alpha``."""
    if alpha < 1:
        raise SynthesisError(f"window must be >= 1, got {alpha}")

    def run(table: ParityTable, topology: Topology | None = None, config: SynthesisConfig | None = None):
        if engine is synthesize_alltoall:
            return synthesize_alltoall(table, window=alpha)
        mode = "arch-greedy" if engine is synthesize_arch_greedy else "arch"
        base = config or SynthesisConfig(mode, topology=topology)
        return _synthesize_arch(
            table, SynthesisConfig(mode, alpha, base.k_trunc, topology or base.topology, base.cost_vectors)
        )

    return run

