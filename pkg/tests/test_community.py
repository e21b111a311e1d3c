import io
import itertools

import numpy as np
import pytest

from commspread.community import (
    Partition,
    StrengthCategory,
    load_partition,
    louvain_partition,
    mixing_parameter,
    modularity,
    strength_category,
)
from commspread.errors import ComputationError, ConfigError, DataError
from commspread.graph import Graph

from conftest import random_graph, two_triangles


def modularity_oracle(g, assignment):
    # pair sum over the adjacency matrix
    a = g.to_sparse().toarray()
    k = a.sum(1)
    two_m = k.sum()
    same = np.equal.outer(assignment, assignment)
    return float(((a - np.outer(k, k) / two_m) * same).sum() / two_m)


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def best_partition(g):
    best, best_q = None, -np.inf
    for blocks in set_partitions(list(range(g.node_count))):
        a = np.empty(g.node_count, dtype=int)
        for c, block in enumerate(blocks):
            a[block] = c
        q = modularity_oracle(g, a)
        if q > best_q + 1e-12:
            best, best_q = a, q
    return best, best_q


def test_fixture_aggregates(fixture_graph):
    p = load_partition(io.StringIO("0 A\n1 A\n2 A\n3 B\n4 B\n5 B\n"), fixture_graph)
    assert p.community_count == 2
    assert p.community_sizes.tolist() == [3, 3]
    assert p.community_internal_edges.tolist() == [3, 3]
    assert p.inter_edge_count == 1
    assert p.labels == ("A", "B")
    assert p.links_of(2) == {0: 2, 1: 1}


def test_partition_invariants():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = random_graph(rng, 25, 0.2)
        p = Partition.from_assignment(g, rng.integers(0, 4, 25))
        assert np.array_equal(p.intra + p.inter, g.degrees)
        assert p.community_internal_edges.sum() + p.inter_edge_count == g.edge_count
        assert np.array_equal(np.asarray(p.links.sum(axis=1)).ravel(), g.degrees)
        assert sorted(set(p.assignment.tolist())) == list(range(p.community_count))


def test_single_community(triangle):
    p = load_partition(io.StringIO("0 x\n1 x\n2 x\n"), triangle)
    assert p.community_count == 1 and not p.inter.any()


def test_unassigned_node(fixture_graph):
    with pytest.raises(DataError, match="unassigned node"):
        load_partition(io.StringIO("0 A\n1 A\n2 A\n3 B\n4 B\n"), fixture_graph)


def test_unknown_label_names_line(fixture_graph):
    with pytest.raises(DataError, match=r"line 2.*'zz'"):
        load_partition(io.StringIO("0 A\nzz B\n"), fixture_graph)


def test_conflicting_assignment(fixture_graph):
    with pytest.raises(DataError):
        load_partition(io.StringIO("0 A\n0 B\n"), fixture_graph)


def test_modularity_examples(fixture_graph, fixture_partition, triangle):
    assert modularity(fixture_graph, fixture_partition) == pytest.approx(5 / 14, abs=1e-12)
    one = Partition.from_assignment(fixture_graph, [0] * 6)
    assert modularity(fixture_graph, one) == pytest.approx(0.0, abs=1e-15)
    singletons = Partition.from_assignment(triangle, [0, 1, 2])
    assert modularity(triangle, singletons) == pytest.approx(-1 / 3)


def test_modularity_matches_pair_sum():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(2, 30))
        g = random_graph(rng, n, 0.25)
        if g.edge_count == 0:
            continue
        a = rng.integers(0, 5, n)
        p = Partition.from_assignment(g, a)
        assert modularity(g, p) == pytest.approx(modularity_oracle(g, a), abs=1e-12)


def test_modularity_without_edges():
    g = Graph.from_edges(3, [])
    with pytest.raises(ComputationError):
        modularity(g, Partition.from_assignment(g, [0, 1, 2]))


def test_mixing_examples(fixture_graph, fixture_partition):
    assert mixing_parameter(fixture_graph, fixture_partition) == pytest.approx(1 / 7)
    g = two_triangles(bridge=False)
    assert mixing_parameter(g, Partition.from_assignment(g, [0, 0, 0, 1, 1, 1])) == 0.0
    edge = Graph.from_edges(2, [(0, 1)])
    assert mixing_parameter(edge, Partition.from_assignment(edge, [0, 1])) == 1.0


@pytest.mark.parametrize("mu, expected", [
    (0.0, StrengthCategory.STRONG), (0.05, StrengthCategory.STRONG),
    (0.084, StrengthCategory.STRONG), (0.0841, StrengthCategory.MEDIUM),
    (0.20, StrengthCategory.MEDIUM), (0.366, StrengthCategory.MEDIUM),
    (0.39, StrengthCategory.MEDIUM), (0.410, StrengthCategory.WEAK),
    (0.50, StrengthCategory.WEAK), (1.0, StrengthCategory.WEAK),
])
def test_strength_category(mu, expected):
    assert strength_category(mu) is expected


def test_strength_category_rejects_bad_input():
    with pytest.raises(ConfigError):
        strength_category(1.5)
    with pytest.raises(ConfigError):
        strength_category(0.2, strong_max=0.5, weak_min=0.4)


def test_louvain_disjoint_triangles_is_optimal():
    g = two_triangles(bridge=False)
    best, best_q = best_partition(g)
    p = louvain_partition(g, seed=0)
    assert p.community_count == 2
    assert modularity(g, p) == pytest.approx(best_q)
    assert len(set(zip(p.assignment.tolist(), best.tolist()))) == 2


def test_louvain_single_edge():
    g = Graph.from_edges(2, [(0, 1)])
    p = louvain_partition(g, seed=4)
    assert modularity(g, p) == pytest.approx(modularity_oracle(g, p.assignment))
    assert p.community_count in (1, 2)


def test_louvain_isolated_nodes():
    g = Graph.from_edges(3, [])
    assert louvain_partition(g, seed=1).assignment.tolist() == [0, 1, 2]


def test_louvain_near_brute_force_on_small_graphs():
    rng = np.random.default_rng(5)
    for _ in range(8):
        g = random_graph(rng, 7, 0.4)
        if g.edge_count == 0:
            continue
        _, best_q = best_partition(g)
        q = modularity(g, louvain_partition(g, seed=int(rng.integers(100))))
        assert q <= best_q + 1e-12
        assert q >= best_q - 0.1


def test_louvain_is_seed_deterministic():
    g = random_graph(np.random.default_rng(9), 80, 0.06)
    a = louvain_partition(g, seed=3).assignment
    b = louvain_partition(g, seed=3).assignment
    assert np.array_equal(a, b)


def test_louvain_recovers_planted_blocks():
    rng = np.random.default_rng(2)
    n = 60
    comm = np.arange(n) // 15
    edges = [(i, j) for i, j in itertools.combinations(range(n), 2)
             if rng.random() < (0.6 if comm[i] == comm[j] else 0.01)]
    g = Graph.from_edges(n, edges)
    p = louvain_partition(g, seed=0)
    assert p.community_count == 4
    assert len(set(zip(p.assignment.tolist(), comm.tolist()))) == 4
