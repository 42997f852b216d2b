"""
Tests for layered partitions and their validator
"""

from fractions import Fraction

import pytest

from conftest import cycle_graph, path_graph
from src.errors import EpsilonTooSmall, GirthTooSmall, NotInFamily, WtTooSmall
from src.graph_core import Graph, RandomSource, back_degrees, find_close_pair, k_independent_low_degree
from src.partition import (
    LayeredPartition,
    general_depth,
    girth7_depth,
    partition_general,
    partition_girth7,
    peel_fraction,
    validate_partition,
)
from src.target_generators import bounded_density, girth7_subdivided, spanning_tree


def test_depth_formulas():
    assert general_depth(100, 2) == 1180
    assert girth7_depth(100, 2, 2) == 1180
    assert peel_fraction(2, 2) == Fraction(1, 96)


class TestGeneral:
    def test_empty_graph(self):
        P = partition_general(Graph(10), 2, 2, 0.1)
        assert P.top == (0,)
        assert P.base == ()
        assert P.peeled == (tuple(range(1, 10)),)
        assert validate_partition(Graph(10), P).passed

    def test_path(self, p10):
        P = partition_general(p10, 2, 2, Fraction(1, 10))
        assert P.top == (0,)
        assert P.base == (1,)
        assert P.peeled == ((4, 7), (3, 6, 9), (2, 5, 8))
        assert P.back_degree_cap == 4
        assert P.effective_depth == 3
        assert validate_partition(p10, P).passed

    def test_rejects_dense_target(self, k4):
        with pytest.raises(NotInFamily):
            partition_general(k4, 3, 2, 0.25)

    def test_rejects_high_degree(self, p10):
        with pytest.raises(NotInFamily):
            partition_general(p10, 1, 2, 0.1)

    def test_epsilon_too_small(self, p10):
        with pytest.raises(EpsilonTooSmall):
            partition_general(p10, 2, 2, 0.05)

    def test_top_layer_too_large(self, p10):
        with pytest.raises(WtTooSmall) as info:
            partition_general(p10, 2, 2, 0.5)
        assert info.value.required == 5
        assert info.value.achievable == 2

    @pytest.mark.parametrize("seed", range(20))
    def test_random_trees_validate(self, seed):
        H = spanning_tree(80, 4, RandomSource(seed, 'tree'))
        P = partition_general(H, 4, 2, Fraction(1, 80))
        assert validate_partition(H, P).passed
        assert P.n == 80

    @pytest.mark.parametrize("seed", range(10))
    def test_forest_unions_validate(self, seed):
        H = bounded_density(60, 4, 4, RandomSource(seed, 'forests'))
        P = partition_general(H, 4, 4, Fraction(1, 60))
        report = validate_partition(H, P)
        assert report.passed, report.failures()


class TestGirth7:
    def test_rejects_six_cycle(self):
        with pytest.raises(GirthTooSmall) as info:
            partition_girth7(cycle_graph(6), 2, 2, 0.2)
        assert info.value.girth == 6
        assert sorted(info.value.cycle) == list(range(6))

    def test_seven_cycle_needs_larger_epsilon(self):
        with pytest.raises(EpsilonTooSmall):
            partition_girth7(cycle_graph(7), 2, 2, 0.1)

    def test_seven_cycle(self):
        H = cycle_graph(7)
        P = partition_girth7(H, 2, 2, 0.15)
        assert P.top == (0,)
        assert P.base == (1, 6)
        assert P.back_degree_cap == 2
        assert P.construction == 'girth7'
        assert validate_partition(H, P).passed

    def test_tree_accepted(self, p10):
        P = partition_girth7(p10, 2, 2, 0.1)
        assert validate_partition(p10, P).passed

    @pytest.mark.parametrize("seed", range(10))
    def test_subdivided_targets_validate(self, seed):
        H = girth7_subdivided(90, 4, 3, RandomSource(seed, 'sub'))
        P = partition_girth7(H, 4, 3, Fraction(1, 90))
        report = validate_partition(H, P)
        assert report.passed, report.failures()
        assert P.back_degree_cap == 3


class TestValidator:
    def test_top_pair_too_close(self, p10):
        P = LayeredPartition(
            layers=((1, 2, 4), (5, 6, 7, 8, 9), (0, 3)),
            epsilon=Fraction(1, 5),
            back_degree_cap=4,
            nominal_depth=2,
        )
        report = validate_partition(p10, P)
        assert not report.top_independent
        assert report.top_pair == (0, 3, 3)
        assert not report.passed

    def test_base_not_neighborhood(self, p10):
        P = LayeredPartition(
            layers=((1, 2), tuple(range(3, 10)), (0,)),
            epsilon=Fraction(1, 10),
            back_degree_cap=4,
            nominal_depth=2,
        )
        report = validate_partition(p10, P)
        assert not report.base_is_neighborhood
        assert report.base_issue == ((), (2,))
        assert any(issue.startswith('(ii)') for issue in report.failures())

    def test_layer_pair_and_back_degree(self):
        H = path_graph(4)
        P = LayeredPartition(
            layers=((), (1, 2), (0, 3)),
            epsilon=Fraction(1, 2),
            back_degree_cap=0,
            nominal_depth=2,
        )
        report = validate_partition(H, P)
        assert report.layer_pair == (1, 1, 2, 1)
        assert not report.back_degree

    def test_back_degrees_respect_cap(self, p10):
        P = partition_general(p10, 2, 2, 0.1)
        order = [v for layer in P.layers for v in layer]
        counts = dict(zip(order, back_degrees(p10, order)))
        assert all(counts[v] <= P.back_degree_cap for v in order if v not in P.base)


def partition_corpus():
    for seed in range(200):
        yield 'tree', spanning_tree(200 + 9 * seed, 4, RandomSource(seed, 'corpus-tree')), 4, 2
    for seed in range(200):
        yield 'forests', bounded_density(60 + 2 * seed, 4, 4, RandomSource(seed, 'corpus-forests')), 4, 4
    for seed in range(60):
        n = 90 + 3 * seed
        yield 'girth7', girth7_subdivided(n, 4, 2, RandomSource(seed, 'corpus-g7')), 4, 2
        yield 'girth7', girth7_subdivided(n, 4, 3, RandomSource(seed, 'corpus-g7')), 4, 3


@pytest.mark.slow
def test_partition_corpus_validates():
    checked = 0
    for family, H, delta, d in partition_corpus():
        if family == 'girth7':
            P, cap = partition_girth7(H, delta, d, Fraction(1, H.n)), d
        else:
            P, cap = partition_general(H, delta, d, Fraction(1, H.n)), 2 * d
        report = validate_partition(H, P)
        assert report.passed, (family, H.n, report.failures())
        assert P.back_degree_cap == cap

        chosen = k_independent_low_degree(H, d, 2)
        assert find_close_pair(H, chosen, 2) is None
        assert len(chosen) >= Fraction(H.n, (d + 1) * d * H.max_degree() ** 2)
        checked += 1
    assert checked == 520
