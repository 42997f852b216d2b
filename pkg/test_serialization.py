"""
Tests for the text formats
"""

from fractions import Fraction

import pytest

from conftest import path_graph, rainbow_complete
from src.embed import Embedding
from src.graph_core import Graph
from src.host_prep import HostPlan
from src.partition import partition_general
from src.serialization import (
    read_colored_edge_list,
    read_edge_list,
    read_embedding,
    read_host_plan,
    read_partition,
    write_edge_list,
    write_embedding,
    write_host_plan,
    write_partition,
)


class TestEdgeLists:
    def test_plain_layout(self, tmp_path):
        path = tmp_path / 'target.txt'
        write_edge_list(Graph(4, [(2, 1), (0, 3)]), path)
        assert path.read_text() == "4 2\n0 3\n1 2\n"
        assert read_edge_list(path) == Graph(4, [(0, 3), (1, 2)])

    def test_isolated_vertices_survive(self, tmp_path):
        path = tmp_path / 'sparse.txt'
        write_edge_list(Graph(6, [(0, 1)]), path)
        assert read_edge_list(path).n == 6

    def test_colored(self, tmp_path):
        path = tmp_path / 'host.txt'
        G = rainbow_complete(4)
        write_edge_list(G, path)
        lines = path.read_text().splitlines()
        assert lines[:3] == ["4 6", "c 6", "0 1 1"]
        assert read_colored_edge_list(path) == G

    def test_edge_count_mismatch(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text("3 2\n0 1\n")
        with pytest.raises(ValueError, match="header says 2 edges"):
            read_edge_list(path)

    def test_bad_row_names_line(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text("3 1\n0 x\n")
        with pytest.raises(ValueError, match="line 2"):
            read_edge_list(path)

    def test_unordered_pair_rejected(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text("3 1\n2 1\n")
        with pytest.raises(ValueError, match="line 2"):
            read_edge_list(path)

    def test_color_out_of_range(self, tmp_path):
        path = tmp_path / 'bad.txt'
        path.write_text("2 1\nc 2\n0 1 3\n")
        with pytest.raises(ValueError, match="outside"):
            read_colored_edge_list(path)

    def test_plain_file_is_not_colored(self, tmp_path):
        path = tmp_path / 'plain.txt'
        write_edge_list(path_graph(3), path)
        with pytest.raises(ValueError, match="missing"):
            read_colored_edge_list(path)


class TestPartitionFiles:
    def test_layout(self, tmp_path, p10):
        path = tmp_path / 'partition.txt'
        write_partition(partition_general(p10, 2, 2, Fraction(1, 10)), path)
        assert path.read_text().splitlines() == [
            "t 591 t* 3 eps 1/10 d 4",
            "W0: 1",
            "W1: 4 7",
            "W2: 3 6 9",
            "W3: 2 5 8",
            "W4: 0",
        ]

    def test_read_back(self, tmp_path, p10):
        path = tmp_path / 'partition.txt'
        P = partition_general(p10, 2, 2, Fraction(1, 10))
        write_partition(P, path)
        assert read_partition(path) == P

    def test_layer_count_checked(self, tmp_path):
        path = tmp_path / 'partition.txt'
        path.write_text("t 5 t* 2 eps 1/4 d 4\nW0: 1\nW1: 2\nW2: 0\n")
        with pytest.raises(ValueError, match="needs 4 layers"):
            read_partition(path)

    def test_layer_labels_checked(self, tmp_path):
        path = tmp_path / 'partition.txt'
        path.write_text("t 5 t* 0 eps 1/4 d 4\nW0: 1\nW2: 0\n")
        with pytest.raises(ValueError, match="line 3"):
            read_partition(path)


class TestHostPlanFiles:
    def test_read_back(self, tmp_path):
        path = tmp_path / 'plan.txt'
        plan = HostPlan(((0, 1, 2, 3), (4,), (5,)), ((0, 1), (2, 3)), 2, Fraction(1, 6))
        write_host_plan(plan, path)
        assert path.read_text().splitlines()[:2] == ["d 2 eps 1/6", "V0: 0 1 2 3"]
        assert read_host_plan(path) == plan

    def test_clique_size_checked(self, tmp_path):
        path = tmp_path / 'plan.txt'
        path.write_text("d 2 eps 1/6\nV0: 0 1 2\nK:\n0 1 2\n")
        with pytest.raises(ValueError, match="line 4"):
            read_host_plan(path)


class TestEmbeddingFiles:
    def test_plain(self, tmp_path):
        path = tmp_path / 'embedding.txt'
        f = Embedding()
        f.assign(0, [(1, 5), (0, 2)])
        write_embedding(f, path)
        assert path.read_text() == "n 2\n0 2\n1 5\n"
        assert read_embedding(path).mapping == {0: 2, 1: 5}

    def test_with_colors(self, tmp_path):
        path = tmp_path / 'embedding.txt'
        H = path_graph(3)
        f = Embedding()
        f.assign(0, [(0, 0), (1, 1), (2, 2)])
        f.colors.update({(0, 1): 4, (1, 2): 7})
        write_embedding(f, path, target=H)
        assert path.read_text().splitlines() == ["n 3", "0 0 -", "1 1 4", "2 2 7"]
        assert read_embedding(path, target=H).colors == {(0, 1): 4, (1, 2): 7}

    def test_row_count_checked(self, tmp_path):
        path = tmp_path / 'embedding.txt'
        path.write_text("n 3\n0 0\n1 1\n")
        with pytest.raises(ValueError, match="found 2"):
            read_embedding(path)
