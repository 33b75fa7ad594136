import itertools

import numpy as np
import pytest

from paritynet.arborescence import (
    Arborescence,
    ParityGraph,
    build_parity_graph,
    enumerate_arborescences,
    min_weight_spanning_arborescence,
    traversal_sequence,
    tree_arborescence,
)
from paritynet.gf2 import InvalidOperation, ParityTable, hamming_weight, row_add

FIG2_WEIGHTS = {(2, 3): -1, (3, 2): -2, (5, 3): 0, (3, 5): -2, (5, 2): -2, (2, 5): -3}
FIG3_EDGES = [(1, 4), (4, 5), (5, 6), (5, 8), (8, 11), (10, 11)]


def recount_weight(table, i, j):
    pi, pj = table.bits[i - 1].astype(int), table.bits[j - 1].astype(int)
    return int(np.sum(pi ^ pj)) - int(np.sum(pj))


def random_graph(rng, size):
    verts = tuple(range(1, size + 1))
    weights = {(i, j): int(rng.integers(-9, 10)) for i in verts for j in verts if i != j}
    return ParityGraph(verts, weights)


def is_successors_first(pairs, arb):
    """Each vertex appears only after all of its descendants."""
    pos = {child: k for k, (child, _) in enumerate(pairs)}
    return all(pos[c] < pos[p] for c, p in arb.parent.items() if p != arb.root)


def test_fig2_weights(fig2_table):
    graph = build_parity_graph(fig2_table, 0)
    assert graph.vertices == (2, 3, 5)
    assert dict(graph.weights) == FIG2_WEIGHTS


def test_fig2_arborescence(fig2_table):
    arb = min_weight_spanning_arborescence(build_parity_graph(fig2_table, 0))
    assert arb.root == 3
    assert dict(arb.parent) == {2: 3, 5: 2}
    assert arb.total_weight(build_parity_graph(fig2_table, 0)) == -5


def test_single_vertex_graph():
    table = ParityTable.from_strings(["010", "110"])
    graph = build_parity_graph(table, 0)
    assert graph.arcs == []
    arb = min_weight_spanning_arborescence(graph)
    assert arb.root == 2 and arb.total_weight(graph) == 0
    assert traversal_sequence(arb) == []


def test_zero_column_and_empty_graph():
    table = ParityTable.from_rows([[1, 0], [0, 1]])
    table.bits[:, 1] = 0
    with pytest.raises(InvalidOperation):
        build_parity_graph(table, 1)
    with pytest.raises(InvalidOperation):
        min_weight_spanning_arborescence(ParityGraph((), {}))


def test_weights_match_recount(rng):
    for _ in range(30):
        bits = rng.integers(0, 2, size=(5, 8), dtype=np.uint8)
        bits[0, :] = 1  # keep every column nonzero
        table = ParityTable._trusted(bits, None)
        col = int(rng.integers(0, 8))
        graph = build_parity_graph(table, col)
        for i, j in graph.arcs:
            assert graph.weight(i, j) == recount_weight(table, i, j)
            assert -table.m <= graph.weight(i, j) <= table.m


@pytest.mark.parametrize("size,count", [(1, 1), (2, 2), (3, 9), (4, 64)])
def test_enumeration_counts(size, count):
    arbs = list(enumerate_arborescences(range(1, size + 1)))
    assert len(arbs) == count
    assert len({(a.root, tuple(sorted(a.parent.items()))) for a in arbs}) == count


def test_enumeration_guard():
    with pytest.raises(InvalidOperation):
        next(enumerate_arborescences(range(8)))


def test_matches_exhaustive_oracle(rng):
    for _ in range(200):
        graph = random_graph(rng, int(rng.integers(2, 6)))
        arb = min_weight_spanning_arborescence(graph)
        assert arb.is_valid(graph.vertices)
        best = min(a.total_weight(graph) for a in enumerate_arborescences(graph.vertices))
        assert arb.total_weight(graph) == best


def test_deterministic_lowest_root_on_ties():
    graph = ParityGraph((1, 2, 3), {a: 0 for a in itertools.permutations((1, 2, 3), 2)})
    assert min_weight_spanning_arborescence(graph).root == 1


def test_fig2_traversal():
    assert traversal_sequence(Arborescence(3, {2: 3, 5: 2})) == [(5, 2), (2, 3)]


def test_fig3_traversal():
    arb = tree_arborescence(FIG3_EDGES, 1)
    pairs = traversal_sequence(arb)
    assert len(pairs) == 6
    assert is_successors_first(pairs, arb)
    assert pairs == [(6, 5), (10, 11), (11, 8), (8, 5), (5, 4), (4, 1)]


def test_traversal_reduces_column_and_weight_identity(rng):
    """Replaying the traversal leaves a unit column at the root and shifts h(P) by the arc weights."""
    for _ in range(100):
        n, m = int(rng.integers(2, 7)), int(rng.integers(1, 9))
        bits = rng.integers(0, 2, size=(n, m), dtype=np.uint8)
        bits[:, 0] = 0
        bits[rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False), 0] = 1
        bits[0, 1:] = 1
        table = ParityTable._trusted(bits, None)
        graph = build_parity_graph(table, 0)
        candidates = [min_weight_spanning_arborescence(graph)]
        if len(graph.vertices) <= 4:
            candidates += list(enumerate_arborescences(graph.vertices))[:5]
        for arb in candidates:
            after = table
            for i, j in traversal_sequence(arb):
                after = row_add(after, i, j)
            col = after.bits[:, 0]
            assert col.sum() == 1 and col[arb.root - 1] == 1
            assert hamming_weight(after) == hamming_weight(table) + arb.total_weight(graph)


def test_tree_arborescence_orients_away_from_root():
    arb = tree_arborescence(FIG3_EDGES, 10)
    assert arb.root == 10 and arb.parent[11] == 10 and arb.parent[1] == 4
    assert arb.is_valid()
