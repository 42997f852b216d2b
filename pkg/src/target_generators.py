"""
Target Generators
Random members of the target families used by the sweeps:
- spanning_tree: random tree with maximum degree <= Delta
- bounded_density: edge-disjoint union of bounded-degree random forests
- girth7_subdivided: a sparse base graph with every edge subdivided twice
- file: an edge list read from disk
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Set

import numpy as np

from src.errors import InfeasibleParameters
from src.graph_core import Edge, Graph, RandomSource, girth, max_density, normalize_edge
from src.serialization import read_edge_list

logger = logging.getLogger(__name__)


class TargetFamily(str, Enum):
    SPANNING_TREE = 'spanning_tree'
    BOUNDED_DENSITY = 'bounded_density'
    GIRTH7_SUBDIVIDED = 'girth7_subdivided'
    FILE = 'file'


def _grow_forest(n: int, cap: int, gen: np.random.Generator, avoid: Set[Edge]) -> List[Edge]:
    """
    Random growth: vertex i (in a random order) attaches to a uniformly chosen
    earlier vertex with spare degree, skipping pairs already in `avoid`.
    """
    order = gen.permutation(n).tolist()
    degree = [0] * n
    open_slots: List[int] = []
    edges: List[Edge] = []
    for v in order:
        choices = [u for u in open_slots if normalize_edge(u, v) not in avoid]
        if choices:
            u = choices[int(gen.integers(0, len(choices)))]
            edges.append(normalize_edge(u, v))
            degree[u] += 1
            degree[v] += 1
            if degree[u] >= cap:
                open_slots.remove(u)
        if degree[v] < cap:
            open_slots.append(v)
    return edges


def spanning_tree(n: int, delta: int, rng: RandomSource) -> Graph:
    """Random spanning tree with maximum degree at most delta."""
    if n < 1:
        raise InfeasibleParameters(f"n must be positive, got {n}")
    if delta < 2 and n > 2:
        raise InfeasibleParameters(f"no spanning tree on {n} vertices has max degree {delta}")
    return Graph(n, _grow_forest(n, max(delta, 1), rng.generator(), set()))


def bounded_density(n: int, delta: int, d: int, rng: RandomSource) -> Graph:
    """
    Union of max(1, d // 2) edge-disjoint random forests, each with degree
    cap delta // forests. Density stays below 2 * forests <= d and the
    maximum degree stays at most delta.
    """
    forests = max(1, d // 2)
    cap = delta // forests
    if cap < 1:
        raise InfeasibleParameters(f"Delta={delta} too small for {forests} forests")
    if d < 2:
        raise InfeasibleParameters(f"d must be at least 2, got {d}")

    edges: Set[Edge] = set()
    for i in range(forests):
        edges.update(_grow_forest(n, cap, rng.child(f"forest{i}").generator(), edges))
    graph = Graph(n, edges)
    logger.debug(f"bounded_density: n={n}, m={graph.num_edges}, density={max_density(graph)}")
    return graph


def subdivide_twice(base: Graph, n: Optional[int] = None) -> Graph:
    """
    Replace every edge uv by the path u-x-y-v, then pad with isolated vertices to n.

    Base vertices keep their labels; edge j (in sorted order) gets the new
    vertices b + 2j and b + 2j + 1.
    """
    b = base.n
    edges: List[Edge] = []
    for j, (u, v) in enumerate(base.sorted_edges()):
        x, y = b + 2 * j, b + 2 * j + 1
        edges.extend([(u, x), (x, y), (y, v)])
    size = b + 2 * base.num_edges
    total = size if n is None else n
    if total < size:
        raise InfeasibleParameters(f"subdivision needs {size} vertices, n={total}")
    return Graph(total, edges)


def _close_cycle(b: int, edges: Set[Edge], gen: np.random.Generator) -> Edge:
    """Edge between two random leaves of a tree on b >= 3 vertices."""
    degree = [0] * b
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    leaves = [v for v in range(b) if degree[v] == 1]
    i, j = gen.choice(len(leaves), size=2, replace=False).tolist()
    return normalize_edge(leaves[i], leaves[j])


def girth7_subdivided(n: int, delta: int, d: int, rng: RandomSource) -> Graph:
    """
    Subdivided sparse target: girth at least 9, density at most d.

    The base is two edge-disjoint forests when d >= 3 and Delta >= 4.
    Otherwise it is one random tree plus an edge joining two of its leaves,
    so the target keeps exactly one cycle and density 2. The base has
    n // (1 + 2k) vertices. Labels are shuffled at the end.
    """
    if delta < 2 or d < 2:
        raise InfeasibleParameters(f"need Delta >= 2 and d >= 2, got {delta}, {d}")
    forests = 2 if d >= 3 and delta >= 4 else 1
    b = n // (1 + 2 * forests)
    if b < 2:
        raise InfeasibleParameters(f"n={n} too small for a subdivided base")

    edges: Set[Edge] = set()
    for i in range(forests):
        edges.update(_grow_forest(b, delta // forests, rng.child(f"base{i}").generator(), edges))
    if forests == 1 and b >= 3:
        edges.add(_close_cycle(b, edges, rng.child('cycle').generator()))
    padded = subdivide_twice(Graph(b, edges), n)

    relabel = rng.child('labels').generator().permutation(n).tolist()
    graph = Graph(n, ((relabel[u], relabel[v]) for u, v in padded.edges))
    if girth(graph) < 7:
        raise InfeasibleParameters("subdivided target has girth below 7")
    if max_density(graph) > d:
        raise InfeasibleParameters("subdivided target exceeds density bound")
    return graph


_FAMILIES: Dict[TargetFamily, Callable[..., Graph]] = {
    TargetFamily.SPANNING_TREE: lambda n, delta, d, rng: spanning_tree(n, delta, rng),
    TargetFamily.BOUNDED_DENSITY: bounded_density,
    TargetFamily.GIRTH7_SUBDIVIDED: girth7_subdivided,
}


def generate_target(
    family: TargetFamily,
    n: int,
    delta: int,
    d: int,
    rng: RandomSource,
    path: Optional[Path] = None,
) -> Graph:
    """
    Generate (or load) one target graph.

    Args:
        family: Target family
        n: Vertex count (checked against the file for the file family)
        delta: Maximum degree bound
        d: Density bound
        rng: Random stream
        path: Edge-list file for the file family

    Returns:
        Target graph

    Raises:
        InfeasibleParameters
    """
    family = TargetFamily(family)
    if family is TargetFamily.FILE:
        if path is None:
            raise InfeasibleParameters("file family needs a path")
        graph = read_edge_list(path)
        if graph.n != n:
            raise InfeasibleParameters(f"{path} has {graph.n} vertices, expected {n}")
        return graph
    return _FAMILIES[family](n, delta, d, rng)
