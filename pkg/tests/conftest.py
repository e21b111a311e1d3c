import numpy as np
import pytest

from commspread.community import Partition
from commspread.graph import Graph

BRIDGE_EDGES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]


def two_triangles(bridge=True):
    edges = BRIDGE_EDGES if bridge else [e for e in BRIDGE_EDGES if e != (2, 3)]
    return Graph.from_edges(6, edges)


def random_graph(rng, n, p):
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_edges(n, list(zip(*np.nonzero(upper))))


@pytest.fixture
def fixture_graph():
    return two_triangles()


@pytest.fixture
def fixture_partition(fixture_graph):
    return Partition.from_assignment(fixture_graph, [0, 0, 0, 1, 1, 1])


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star():
    return Graph.from_edges(5, [(0, i) for i in range(1, 5)])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
