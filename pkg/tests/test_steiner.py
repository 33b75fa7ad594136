import networkx as nx
import numpy as np
import pytest

from paritynet.arborescence import traversal_sequence, tree_arborescence
from paritynet.steiner import (
    CostCache,
    SteinerError,
    SteinerTree,
    cost,
    exact_steiner_edges,
    fill_in,
    k_min_steiner_trees,
    steiner_tree,
)
from paritynet.topology import Topology, TopologyError, complete, grid

from .conftest import FIG3_TERMINALS


def random_connected(rng, n):
    """Random spanning tree plus a few extra edges."""
    edges = set()
    order = rng.permutation(n) + 1
    for k in range(1, n):
        u, v = int(order[k]), int(order[rng.integers(0, k)])
        edges.add((min(u, v), max(u, v)))
    for _ in range(int(rng.integers(0, n + 1))):
        u, v = (int(x) + 1 for x in rng.choice(n, size=2, replace=False))
        edges.add((min(u, v), max(u, v)))
    return Topology(n, sorted(edges))


def exact_by_networkx(terminals, g):
    """Smallest connected induced subgraph containing the terminals, via networkx."""
    import itertools

    graph = nx.Graph(list(g.edges))
    others = [v for v in range(1, g.n + 1) if v not in terminals]
    for extra in range(len(others) + 1):
        for chosen in itertools.combinations(others, extra):
            nodes = set(terminals) | set(chosen)
            if len(nodes) == 1 or nx.is_connected(graph.subgraph(nodes)):
                return nx.minimum_spanning_tree(graph.subgraph(nodes)).number_of_edges()


def test_fig3_tree(grid34):
    tree = steiner_tree(FIG3_TERMINALS, grid34)
    assert len(tree.vertices) == 7 and len(tree.edges) == 6
    assert tree.steiner_nodes == {4, 5, 11}
    assert set(tree.edges) == {(1, 4), (4, 5), (5, 6), (5, 8), (8, 11), (10, 11)}
    assert tree.is_valid(grid34)


def test_fig3_fill_in_and_cost(grid34):
    tree = steiner_tree(FIG3_TERMINALS, grid34)
    assert fill_in(tree) == [(4, 1), (5, 4), (11, 8)]
    assert cost(FIG3_TERMINALS, grid34) == 9 == tree.cost


def test_singleton():
    g = grid(3, 3)
    tree = steiner_tree([5], g)
    assert tree.vertices == (5,) and tree.edges == ()
    assert cost([5], g) == 0 and fill_in(tree) == []


def test_bad_terminals(grid34):
    with pytest.raises(SteinerError):
        steiner_tree([], grid34)
    with pytest.raises(TopologyError):
        steiner_tree([1, 13], grid34)


def test_complete_topology_cost(rng):
    g = complete(7)
    for _ in range(50):
        s = set(int(v) + 1 for v in rng.choice(7, size=int(rng.integers(1, 8)), replace=False))
        assert cost(s, g) == len(s) - 1
        assert fill_in(steiner_tree(s, g)) == []


def test_no_steiner_nodes_means_no_fill_in(grid34):
    tree = steiner_tree({1, 2, 3}, grid34)
    assert tree.steiner_nodes == set() and fill_in(tree) == []


def test_exact_oracle_agrees_with_networkx(rng):
    for _ in range(60):
        g = random_connected(rng, int(rng.integers(2, 9)))
        s = set(int(v) + 1 for v in rng.choice(g.n, size=int(rng.integers(1, min(5, g.n) + 1)), replace=False))
        assert exact_steiner_edges(s, g) == exact_by_networkx(s, g)


def test_exact_oracle_guard():
    with pytest.raises(SteinerError):
        exact_steiner_edges({1}, grid(4, 3))


def test_approximation_ratio(rng):
    for _ in range(200):
        g = random_connected(rng, int(rng.integers(2, 11)))
        k = int(rng.integers(1, min(5, g.n) + 1))
        s = set(int(v) + 1 for v in rng.choice(g.n, size=k, replace=False))
        tree = steiner_tree(s, g)
        assert tree.is_valid(g) and s <= set(tree.vertices)
        assert len(tree.edges) <= (2 - 2 / len(s)) * exact_steiner_edges(s, g) + 1e-9


def test_fill_in_covers_tree(rng):
    """Replaying the fill-in pairs on the column sets every tree vertex, then the traversal
    reduces it to the root; the pair total equals the cost."""
    for _ in range(200):
        g = random_connected(rng, int(rng.integers(2, 11)))
        s = set(int(v) + 1 for v in rng.choice(g.n, size=int(rng.integers(1, min(5, g.n) + 1)), replace=False))
        tree = steiner_tree(s, g)
        y = np.zeros(g.n + 1, dtype=np.uint8)
        y[list(s)] = 1
        pairs = fill_in(tree)
        assert len(pairs) == len(tree.steiner_nodes)
        for u, v in pairs:
            assert g.has_edge(u, v)
            y[u] ^= y[v]
        assert all(y[v] == 1 for v in tree.vertices)
        root = min(s)
        steps = traversal_sequence(tree_arborescence(tree.edges, root)) if len(tree.vertices) > 1 else []
        for u, v in steps:
            y[u] ^= y[v]
        assert int(y.sum()) == 1 and y[root] == 1
        assert len(pairs) + len(steps) == cost(s, g)


def test_cost_cache(grid34):
    cache = CostCache(grid34)
    key = sum(1 << (12 - q) for q in FIG3_TERMINALS)
    assert cache(key) == 9 and cache(key) == 9 and len(cache) == 1


def test_k_min_examples(grid34):
    ((c, idx, tree),) = k_min_steiner_trees([FIG3_TERMINALS, {1, 2}], grid34, 1)
    assert (c, idx) == (1, 1) and set(tree.vertices) == {1, 2}
    singles = k_min_steiner_trees([{1}, {5}, {9}, {12}], grid34, 3)
    assert [c for c, _, _ in singles] == [0, 0, 0]
    with pytest.raises(SteinerError):
        k_min_steiner_trees([{1}], grid34, 0)


def test_k_min_matches_sequential(rng):
    for _ in range(100):
        g = random_connected(rng, int(rng.integers(3, 12)))
        sets = [
            set(int(v) + 1 for v in rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False))
            for _ in range(int(rng.integers(1, 12)))
        ]
        k = int(rng.integers(1, len(sets) + 3))
        out = k_min_steiner_trees(sets, g, k)
        expected = sorted(cost(s, g) for s in sets)[:k]
        assert [c for c, _, _ in out] == expected
        for c, idx, tree in out:
            assert tree == steiner_tree(sets[idx], g) and c == cost(sets[idx], g)


def test_steiner_tree_is_deterministic(grid34):
    assert steiner_tree([3, 7, 12], grid34) == steiner_tree([12, 3, 7], grid34)
    assert isinstance(steiner_tree([3, 7, 12], grid34), SteinerTree)
