"""
Tests for auxiliary graphs, matchings and the layer-by-layer embedding
"""

import functools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph, path_graph, star_graph
from src.embed import AuxBipartite, build_aux, embed, max_matching, verify_embedding
from src.errors import CliqueAssignmentFailure, HallViolation, OverlappingTuples, PlanTooShallow
from src.graph_core import Graph, RandomSource, gnp_generate
from src.host_prep import HostPlan, build_host_plan
from src.matching import HopcroftKarp
from src.partition import LayeredPartition, partition_general
from src.target_generators import spanning_tree


def brute_force_matching(adjacency) -> int:
    @functools.lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == len(adjacency):
            return 0
        skip = best(i + 1, used)
        take = [1 + best(i + 1, used | 1 << r) for r in adjacency[i] if not used >> r & 1]
        return max([skip] + take)

    return best(0, 0)


@st.composite
def bipartite_instances(draw):
    left = draw(st.integers(min_value=1, max_value=8))
    right = draw(st.integers(min_value=1, max_value=8))
    return [
        sorted(draw(st.sets(st.integers(min_value=0, max_value=right - 1), max_size=right)))
        for _ in range(left)
    ]


def perfect_matching_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(0, n, 2)])


class TestAux:
    def test_empty_tuple_sees_everything(self, c5):
        B = build_aux(c5, [()], [1, 3, 4])
        assert B.adjacency == ((1, 3, 4),)

    def test_star_center(self):
        B = build_aux(star_graph(5), [(0,)], range(1, 6))
        assert B.adjacency == ((1, 2, 3, 4, 5),)

    def test_common_neighbors_on_cycle(self, c5):
        B = build_aux(c5, [(0, 2)], [1, 3, 4])
        assert B.adjacency == ((1,),)

    def test_overlapping_tuples(self, c5):
        with pytest.raises(OverlappingTuples):
            build_aux(c5, [(0, 1), (1, 2)], [3, 4])


class TestMatching:
    def test_complete_bipartite(self):
        B = AuxBipartite(((0,), (1,), (2,)), (5, 6, 7), ((5, 6, 7),) * 3)
        result = max_matching(B)
        assert result.saturating
        assert sorted(result.pairs.values()) == [5, 6, 7]

    def test_hall_witness(self):
        B = AuxBipartite(((0,), (1,)), (9, 10), ((9,), (9,)))
        result = max_matching(B, step=4)
        assert not result.saturating
        assert result.witness.left_indices == (0, 1)
        assert result.witness.neighborhood == (9,)
        assert result.witness.step == 4
        assert result.witness.recount(B)

    def test_long_augmenting_path(self):
        size = 3000
        adjacency = [[i + 1, i] for i in range(size - 1)] + [[size - 1]]
        assert HopcroftKarp(adjacency).size() == size

    @settings(max_examples=1000, deadline=None)
    @given(bipartite_instances())
    def test_matches_exhaustive_search(self, adjacency):
        B = AuxBipartite(
            tuple((i,) for i in range(len(adjacency))),
            tuple(range(8)),
            tuple(tuple(a) for a in adjacency),
        )
        result = max_matching(B)
        assert result.size == brute_force_matching(adjacency)
        assert len(set(result.pairs.values())) == result.size
        for i, r in result.pairs.items():
            assert r in adjacency[i]
        if not result.saturating:
            assert result.witness.recount(B)
            assert result.witness.deficiency == len(adjacency) - result.size


class TestVerify:
    def test_identity(self, p10):
        assert verify_embedding(p10, complete_graph(10), {v: v for v in range(10)}).passed

    def test_collapsed_vertices(self, p10):
        mapping = {v: v for v in range(10)}
        mapping[3] = 4
        check = verify_embedding(p10, complete_graph(10), mapping)
        assert not check.passed
        assert 'both map' in check.reason

    def test_missing_edge(self):
        check = verify_embedding(path_graph(3), Graph(3, [(0, 1)]), {0: 0, 1: 1, 2: 2})
        assert check.edge == (1, 2)


class TestEmbed:
    def test_matching_into_complete_host(self, source):
        H = perfect_matching_graph(12)
        G = complete_graph(12)
        P = partition_general(H, 2, 2, Fraction(1, 4))
        plan = build_host_plan(G, P.effective_depth, P.epsilon, 2, source, min_slice_size=1)
        f = embed(H, P, G, plan, source.child('embed'))
        assert f.is_total(12)
        assert verify_embedding(H, G, f.mapping).passed
        assert len(f.layer_log) == P.effective_depth + 2

    def test_neighborhoods_land_in_cliques(self, source):
        H = perfect_matching_graph(12)
        G = complete_graph(12)
        P = partition_general(H, 2, 2, Fraction(1, 4))
        plan = build_host_plan(G, P.effective_depth, P.epsilon, 2, source, min_slice_size=1)
        f = embed(H, P, G, plan)
        for w, clique in zip(sorted(P.top), plan.cliques):
            assert {f.mapping[u] for u in H.adjacency(w)} <= set(clique)

    def test_hall_failure_reports_step(self, source):
        H = perfect_matching_graph(8)
        G = Graph(8, [(0, 1), (2, 3)])
        P = partition_general(H, 2, 2, Fraction(1, 4))
        plan = build_host_plan(G, P.effective_depth, P.epsilon, 2, source, min_slice_size=1)
        with pytest.raises(HallViolation) as info:
            embed(H, P, G, plan)
        assert info.value.step == 2
        assert info.value.witness.deficiency >= 1

    def test_clique_too_small(self):
        H = star_graph(2)
        P = LayeredPartition(((1, 2), (0,)), Fraction(1, 3), 4, 1)
        plan = HostPlan(((0, 1, 2),), ((0,),), 1, Fraction(1, 3))
        with pytest.raises(CliqueAssignmentFailure) as info:
            embed(H, P, complete_graph(3), plan)
        assert info.value.vertex == 0

    def test_plan_too_shallow(self, p10, source):
        P = partition_general(p10, 2, 2, 0.1)
        plan = HostPlan((tuple(range(10)),), ((0, 1),), 2, Fraction(1, 10))
        with pytest.raises(PlanTooShallow):
            embed(p10, P, complete_graph(10), plan)

    @pytest.mark.parametrize("seed", range(10))
    def test_path_into_dense_random_host(self, seed):
        source = RandomSource(seed, 'trial')
        H = path_graph(120)
        P = partition_general(H, 2, 2, 0.1)
        G = gnp_generate(120, 0.8, source.child('host'))
        plan = build_host_plan(G, P.effective_depth, P.epsilon, 2, source.child('plan'), min_slice_size=1)
        f = embed(H, P, G, plan, source.child('embed'))
        assert verify_embedding(H, G, f.mapping).passed

    @pytest.mark.parametrize("seed", range(5))
    def test_tree_into_complete_host(self, seed):
        source = RandomSource(seed)
        H = spanning_tree(60, 3, source.child('tree'))
        G = complete_graph(60)
        P = partition_general(H, 3, 2, Fraction(1, 60))
        plan = build_host_plan(G, P.effective_depth, P.epsilon, 2, source.child('plan'), min_slice_size=1)
        f = embed(H, P, G, plan, source.child('embed'))
        assert verify_embedding(H, G, f.mapping).passed
