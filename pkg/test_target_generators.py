"""
Tests for the random target families
"""

from fractions import Fraction

import pytest

from conftest import complete_graph
from src.errors import InfeasibleParameters
from src.graph_core import Graph, RandomSource, girth, is_forest, max_density
from src.partition import partition_girth7, validate_partition
from src.serialization import write_edge_list
from src.target_generators import (
    TargetFamily,
    bounded_density,
    generate_target,
    girth7_subdivided,
    spanning_tree,
    subdivide_twice,
)


def test_degree_two_tree_is_a_path(source):
    H = spanning_tree(5, 2, source)
    assert H.num_edges == 4
    assert is_forest(H)
    assert sorted(H.degree(v) for v in range(5)) == [1, 1, 2, 2, 2]


@pytest.mark.parametrize("seed", range(10))
def test_spanning_tree_respects_degree(seed):
    H = spanning_tree(200, 3, RandomSource(seed))
    assert H.num_edges == 199
    assert is_forest(H)
    assert H.max_degree() <= 3


def test_star_needs_large_delta(source):
    with pytest.raises(InfeasibleParameters):
        spanning_tree(5, 1, source)


@pytest.mark.parametrize("seed", range(5))
def test_bounded_density(seed):
    H = bounded_density(60, 4, 4, RandomSource(seed))
    assert max_density(H) <= 4
    assert H.max_degree() <= 4
    assert H.num_edges > 59


def test_subdivided_k4():
    H = subdivide_twice(complete_graph(4))
    assert H.n == 16
    assert H.num_edges == 18
    assert girth(H) == 9


def test_subdivision_pads_with_isolated_vertices():
    H = subdivide_twice(Graph(2, [(0, 1)]), n=6)
    assert H.n == 6
    assert H.sorted_edges() == [(0, 2), (1, 3), (2, 3)]
    assert H.degree(5) == 0


def test_subdivision_needs_room():
    with pytest.raises(InfeasibleParameters):
        subdivide_twice(complete_graph(4), n=10)


@pytest.mark.parametrize("seed", range(5))
def test_girth7_family(seed):
    H = girth7_subdivided(90, 4, 3, RandomSource(seed))
    assert H.n == 90
    assert girth(H) >= 9
    assert max_density(H) <= 3
    assert H.max_degree() <= 4


@pytest.mark.parametrize("seed", range(5))
def test_girth7_single_forest_base_keeps_a_cycle(seed):
    H = girth7_subdivided(90, 4, 2, RandomSource(seed))
    assert H.num_edges == 90
    assert not is_forest(H)
    assert 9 <= girth(H) < float('inf')
    assert max_density(H) == 2
    P = partition_girth7(H, 4, 2, Fraction(1, 90))
    report = validate_partition(H, P)
    assert report.passed, report.failures()


def test_girth7_degree_two_base_is_one_long_cycle():
    H = girth7_subdivided(30, 2, 2, RandomSource(4))
    assert girth(H) == 30
    assert all(H.degree(v) == 2 for v in range(30))


def test_same_source_same_target():
    first = generate_target(TargetFamily.BOUNDED_DENSITY, 50, 4, 4, RandomSource(3, 'target'))
    second = generate_target('bounded_density', 50, 4, 4, RandomSource(3, 'target'))
    assert first == second


def test_file_family(tmp_path, p10):
    path = tmp_path / 'target.txt'
    write_edge_list(p10, path)
    assert generate_target(TargetFamily.FILE, 10, 2, 2, RandomSource(0), path=path) == p10
    with pytest.raises(InfeasibleParameters):
        generate_target(TargetFamily.FILE, 11, 2, 2, RandomSource(0), path=path)
    with pytest.raises(InfeasibleParameters):
        generate_target(TargetFamily.FILE, 10, 2, 2, RandomSource(0))
