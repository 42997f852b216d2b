"""
Shared fixtures for the test suite
"""

import itertools

import networkx as nx
import pytest

from src.graph_core import ColoredGraph, Graph, RandomSource


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale Monte-Carlo sweeps (deselect with -m 'not slow')")


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def rainbow_complete(n: int) -> ColoredGraph:
    """K_n with every edge a different color."""
    base = complete_graph(n)
    edges = base.sorted_edges()
    return ColoredGraph(base, len(edges), {e: i + 1 for i, e in enumerate(edges)})


@pytest.fixture
def petersen():
    return Graph.from_networkx(nx.petersen_graph())


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def p10():
    return path_graph(10)


@pytest.fixture
def source():
    return RandomSource(12345, 'test')
