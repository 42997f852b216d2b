"""
Graph Core
Graph representation, seeded random generation and the structural
primitives every other stage consumes.

Primitives:
1. G(n,p), split G = G1 u G2, and the colored model G_c(n,p)
2. Exact maximum density via max-flow (densest subgraph)
3. Girth / shortest cycle by breadth-first search
4. Degeneracy ordering with a witness on failure
5. Greedy k-independent sets (lowest index first)
"""

import hashlib
import heapq
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import numpy as np

from src.errors import (
    DegreeCapViolated,
    InvariantViolation,
    NotDDegenerate,
    PreconditionViolated,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

_MASK64 = (1 << 64) - 1


def normalize_edge(u: int, v: int) -> Edge:
    """Return the pair with the smaller endpoint first."""
    return (u, v) if u < v else (v, u)


class Graph:
    """
    Immutable undirected simple graph on vertices 0..n-1.

    Adjacency is stored both as sorted tuples (deterministic iteration)
    and as frozensets (constant-time membership). Instances are safe to
    share between worker processes.
    """

    __slots__ = ('n', '_edges', '_adj', '_nbrs')

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()):
        """
        Build a graph, rejecting loops, duplicates and out-of-range ends.

        Args:
            n: Vertex count (vertices are 0..n-1)
            edges: Unordered pairs
        """
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")

        adjacency: List[Set[int]] = [set() for _ in range(n)]
        edge_set: Set[Edge] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            e = normalize_edge(u, v)
            if e in edge_set:
                raise ValueError(f"duplicate edge {e}")
            edge_set.add(e)
            adjacency[u].add(v)
            adjacency[v].add(u)

        self.n = n
        self._edges: FrozenSet[Edge] = frozenset(edge_set)
        self._nbrs: Tuple[FrozenSet[int], ...] = tuple(frozenset(s) for s in adjacency)
        self._adj: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in adjacency)

    # basic queries

    @property
    def edges(self) -> FrozenSet[Edge]:
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self._edges)

    def vertices(self) -> range:
        return range(self.n)

    def adjacency(self, v: int) -> Tuple[int, ...]:
        """Sorted neighbour list of v."""
        return self._adj[v]

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._nbrs[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbrs[u]

    def degree_within(self, v: int, within: Union[Set[int], FrozenSet[int]]) -> int:
        """Number of neighbours of v inside `within`."""
        return sum(1 for w in self._adj[v] if w in within)

    def vertices_with_degree_at_most(self, d: float, within: Optional[Set[int]] = None) -> List[int]:
        """
        D_{<=d}: vertices of degree at most d, ascending.

        With `within`, degrees are taken in the subgraph induced by `within`
        and only its vertices are returned.
        """
        if within is None:
            return [v for v in range(self.n) if len(self._adj[v]) <= d]
        return sorted(v for v in within if self.degree_within(v, within) <= d)

    def neighborhood(self, vertices: Iterable[int]) -> Set[int]:
        """N(U): vertices outside U adjacent to some vertex of U."""
        members = set(vertices)
        result: Set[int] = set()
        for v in members:
            result.update(self._nbrs[v])
        return result - members

    def ball(self, v: int, radius: int) -> Set[int]:
        """k-neighbourhood of v: every vertex at distance at most `radius`, v included."""
        return set(self.distances_from(v, radius))

    def distances_from(self, source: int, radius: Optional[int] = None) -> Dict[int, int]:
        """Breadth-first distances from `source`, truncated at `radius` when given."""
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            if radius is not None and dist[u] >= radius:
                continue
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def induced(self, vertices: Iterable[int]) -> 'Graph':
        """Subgraph induced by `vertices`, keeping the original labels and vertex count."""
        keep = set(vertices)
        return Graph(self.n, (e for e in self._edges if e[0] in keep and e[1] in keep))

    def union(self, other: 'Graph') -> 'Graph':
        """Edge union of two graphs on the same vertex set."""
        if other.n != self.n:
            raise ValueError(f"vertex counts differ: {self.n} vs {other.n}")
        return Graph(self.n, self._edges | other._edges)

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self._edges)
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> 'Graph':
        """Relabel nodes to 0..n-1 in sorted order and copy the edges."""
        nodes = sorted(graph.nodes())
        index = {node: i for i, node in enumerate(nodes)}
        return cls(len(nodes), ((index[u], index[v]) for u, v in graph.edges()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class ColoredGraph:
    """
    A graph with one color in [1..color_count] on every edge.

    Colors are fixed at generation time; the rainbow procedure only reads a
    color when it exposes the pair.
    """

    base: Graph
    color_count: int
    colors: Mapping[Edge, int] = field(repr=False)

    def __post_init__(self):
        if self.color_count < 1:
            raise ValueError(f"color count must be positive, got {self.color_count}")
        if set(self.colors) != set(self.base.edges):
            raise ValueError("every edge needs exactly one color")
        for e, col in self.colors.items():
            if not 1 <= col <= self.color_count:
                raise ValueError(f"edge {e} has color {col} outside [1..{self.color_count}]")

    def color(self, u: int, v: int) -> int:
        return self.colors[normalize_edge(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return self.base.has_edge(u, v)

    @classmethod
    def overlay(cls, first: 'ColoredGraph', second: 'ColoredGraph') -> 'ColoredGraph':
        """Union of two colored graphs; an edge present in both keeps the first color."""
        if first.color_count != second.color_count:
            raise ValueError("color counts differ")
        colors = dict(second.colors)
        colors.update(first.colors)
        return cls(first.base.union(second.base), first.color_count, colors)


# seeded randomness

def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.blake2b(label.encode('utf-8'), digest_size=8).digest(), 'little')


def derive_seed(*parts: object) -> int:
    """
    Stable 63-bit seed from arbitrary parts.

    Used for trial seeds: derive_seed(base_seed, p_index, trial_index)
    and for stage seeds: derive_seed(trial_seed, 'host').
    """
    digest = hashlib.blake2b('|'.join(repr(p) for p in parts).encode('utf-8'), digest_size=8)
    return int.from_bytes(digest.digest(), 'little') >> 1


@dataclass(frozen=True)
class RandomSource:
    """
    Seeded random stream identified by (seed, label).

    The same pair always produces the same draws; different labels give
    independent streams. Each call to `generator()` restarts the stream.
    """

    seed: int
    label: str = 'root'

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(
            np.random.SeedSequence([self.seed & _MASK64, _label_key(self.label)])
        )

    def child(self, label: str) -> 'RandomSource':
        return RandomSource(self.seed, f"{self.label}/{label}")


# random generation

def gnp_generate(n: int, p: float, rng: RandomSource) -> Graph:
    """
    Sample G(n,p): every pair is an edge independently with probability p.

    Args:
        n: Vertex count
        p: Edge probability in [0, 1]
        rng: Random stream

    Returns:
        Sampled graph
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n == 1:
        return Graph(1)

    rows, cols = np.triu_indices(n, k=1)
    keep = rng.generator().random(rows.size) < p
    return Graph(n, zip(rows[keep].tolist(), cols[keep].tolist()))


def split_probability(p: float) -> float:
    """q with 1 - p = (1 - q)^2, so G1 u G2 at density q is G(n,p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return 1.0 - math.sqrt(1.0 - p)


def gnp_split_generate(n: int, p: float, rng: RandomSource) -> Tuple[Graph, Graph]:
    """Two independent G(n,q) samples whose union is distributed as G(n,p)."""
    q = split_probability(p)
    return gnp_generate(n, q, rng.child('g1')), gnp_generate(n, q, rng.child('g2'))


def gcnp_generate(n: int, p: float, c: int, rng: RandomSource) -> ColoredGraph:
    """
    Sample G_c(n,p): a G(n,p) graph with i.i.d. uniform colors from [1..c].
    """
    if c < 1:
        raise ValueError(f"color count must be positive, got {c}")
    base = gnp_generate(n, p, rng.child('edges'))
    edges = base.sorted_edges()
    drawn = rng.child('colors').generator().integers(1, c + 1, size=len(edges))
    return ColoredGraph(base, c, dict(zip(edges, drawn.tolist())))


def gcnp_split_generate(n: int, p: float, c: int, rng: RandomSource) -> Tuple[ColoredGraph, ColoredGraph]:
    """Colored G1, G2 at density q = 1 - sqrt(1 - p)."""
    q = split_probability(p)
    return gcnp_generate(n, q, c, rng.child('g1')), gcnp_generate(n, q, c, rng.child('g2'))


# structure

def connected_components(G: Graph, within: Optional[Set[int]] = None) -> List[List[int]]:
    """Components (sorted vertex lists) of G, or of the subgraph induced by `within`."""
    pool = set(range(G.n)) if within is None else set(within)
    seen: Set[int] = set()
    components = []
    for start in sorted(pool):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        comp = [start]
        while queue:
            u = queue.popleft()
            for w in G.adjacency(u):
                if w in pool and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        components.append(sorted(comp))
    return components


def is_forest(G: Graph) -> bool:
    return G.num_edges == G.n - len(connected_components(G))


def max_density(G: Graph) -> Fraction:
    """
    Exact maximum density d(G) = max over subgraphs of 2|E(H)|/|V(H)|.

    Forests use the closed form max 2(|C|-1)/|C| over components. Otherwise
    a parametric search over the ratio: each round solves one max-closure
    problem (s -> edge-node with capacity b, edge-node -> endpoints
    uncapacitated, vertex -> t with capacity a for ratio a/b) and moves to
    the density of the improving subgraph until none exists.

    Args:
        G: Graph with n >= 1

    Returns:
        d(G) as a Fraction
    """
    if G.n < 1:
        raise ValueError("max_density needs at least one vertex")
    if G.num_edges == 0:
        return Fraction(0)

    if is_forest(G):
        return max(Fraction(2 * (len(c) - 1), len(c)) for c in connected_components(G))

    ratio = Fraction(G.num_edges, G.n)
    rounds = 0
    while True:
        rounds += 1
        subset = _improving_subgraph(G, ratio)
        if subset is None:
            break
        inside = sum(1 for u, v in G.edges if u in subset and v in subset)
        candidate = Fraction(inside, len(subset))
        if candidate <= ratio:
            raise InvariantViolation(f"density search did not improve past {ratio}")
        ratio = candidate

    logger.debug(f"max_density: {2 * ratio} after {rounds} flow rounds (n={G.n}, m={G.num_edges})")
    return 2 * ratio


def _improving_subgraph(G: Graph, ratio: Fraction) -> Optional[Set[int]]:
    """Vertex set S with |E(S)| - ratio*|S| > 0, or None when no such set exists."""
    a, b = ratio.numerator, ratio.denominator
    flow = nx.DiGraph()
    flow.add_node('s')
    flow.add_node('t')
    for idx, (u, v) in enumerate(G.sorted_edges()):
        flow.add_edge('s', ('e', idx), capacity=b)
        flow.add_edge(('e', idx), ('v', u))
        flow.add_edge(('e', idx), ('v', v))
    for v in range(G.n):
        if G.degree(v) > 0:
            flow.add_edge(('v', v), 't', capacity=a)

    cut_value, (source_side, _) = nx.minimum_cut(flow, 's', 't')
    if b * G.num_edges - cut_value <= 0:
        return None
    return {node[1] for node in source_side if isinstance(node, tuple) and node[0] == 'v'}


def shortest_cycle(G: Graph) -> Optional[List[int]]:
    """
    A shortest cycle as a vertex list, or None for forests.

    Breadth-first search from every root; a non-tree edge (u, w) closes a
    closed walk of length dist(u) + dist(w) + 1. The overall minimum is
    always a simple cycle.
    """
    best: Optional[List[int]] = None
    for root in range(G.n):
        dist = {root: 0}
        parent: Dict[int, Optional[int]] = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= len(best):
                break
            for w in G.adjacency(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < len(best):
                        best = _close_cycle(parent, u, w)
    return best


def _close_cycle(parent: Dict[int, Optional[int]], u: int, w: int) -> List[int]:
    def to_root(x: int) -> List[int]:
        path = [x]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    up = to_root(u)
    down = to_root(w)
    return list(reversed(up)) + down[:-1]


def girth(G: Graph) -> Union[int, float]:
    """Length of the shortest cycle; math.inf for forests."""
    cycle = shortest_cycle(G)
    return math.inf if cycle is None else len(cycle)


def degeneracy_order(H: Graph, d: int, vertices: Optional[Iterable[int]] = None) -> List[int]:
    """
    Ordering v_1..v_n where each vertex has at most d earlier neighbours.

    Repeatedly removes a minimum-degree vertex (lowest index on ties) and
    reverses the removal sequence.

    Args:
        H: Graph
        d: Back-degree bound
        vertices: Restrict to the subgraph induced by these vertices

    Returns:
        The ordering

    Raises:
        NotDDegenerate: the remaining vertices induce minimum degree > d
    """
    active = set(range(H.n)) if vertices is None else set(vertices)
    degree = {v: H.degree_within(v, active) for v in active}
    heap = [(deg, v) for v, deg in degree.items()]
    heapq.heapify(heap)

    removed: List[int] = []
    gone: Set[int] = set()
    while heap:
        deg, v = heapq.heappop(heap)
        if v in gone or deg != degree[v]:
            continue
        if deg > d:
            raise NotDDegenerate(d, active - gone)
        removed.append(v)
        gone.add(v)
        for w in H.adjacency(v):
            if w in active and w not in gone:
                degree[w] -= 1
                heapq.heappush(heap, (degree[w], w))

    return removed[::-1]


def back_degrees(H: Graph, order: Sequence[int]) -> List[int]:
    """For each position i, the number of neighbours of order[i] among order[:i]."""
    seen: Set[int] = set()
    result = []
    for v in order:
        result.append(sum(1 for w in H.adjacency(v) if w in seen))
        seen.add(v)
    return result


def find_close_pair(G: Graph, vertices: Iterable[int], k: int) -> Optional[Tuple[int, int, int]]:
    """
    First pair of `vertices` at distance at most k, as (u, w, distance).

    Returns None when the set is k-independent.
    """
    members = sorted(set(vertices))
    member_set = set(members)
    for u in members:
        for w, dist in sorted(G.distances_from(u, k).items()):
            if w != u and w in member_set:
                return (min(u, w), max(u, w), dist)
    return None


def k_independent_in_subset(G: Graph, S: Iterable[int], k: int, d: Optional[int] = None) -> List[int]:
    """
    Greedy k-independent subset of S (pairwise distance at least k + 1).

    Scans S in ascending order, keeps a vertex unless it lies in the
    k-neighbourhood of an earlier pick.

    Args:
        G: Graph distances are measured in
        S: Candidate vertices
        k: Distance radius
        d: Degree cap on S; enables the |S|/(d*Delta^k) size check

    Returns:
        Chosen vertices, ascending

    Raises:
        DegreeCapViolated: a vertex of S has degree above d
    """
    candidates = sorted(set(S))
    if d is not None:
        for v in candidates:
            if G.degree(v) > d:
                raise DegreeCapViolated(v, G.degree(v), d)

    blocked: Set[int] = set()
    chosen: List[int] = []
    for v in candidates:
        if v in blocked:
            continue
        chosen.append(v)
        blocked |= G.ball(v, k)

    delta = G.max_degree()
    if d is not None and d >= 1 and delta >= 2 and candidates:
        bound = Fraction(len(candidates), d * delta ** k)
        if len(chosen) < bound:
            raise InvariantViolation(f"greedy set of {len(chosen)} below bound {float(bound):.3f}")
    return chosen


def k_independent_low_degree(G: Graph, d: int, k: int) -> List[int]:
    """
    k-independent subset of D_{<=d}(G) of size at least n/((d+1) d Delta^k).

    Raises:
        PreconditionViolated: d*n < 2|E(G)|
    """
    if d * G.n < 2 * G.num_edges:
        raise PreconditionViolated(f"d*n = {d * G.n} < 2|E| = {2 * G.num_edges}")

    low = G.vertices_with_degree_at_most(d)
    if (d + 1) * len(low) < G.n:
        raise InvariantViolation(f"|D<=d| = {len(low)} below n/(d+1) for n={G.n}, d={d}")

    chosen = k_independent_in_subset(G, low, k, d)
    delta = G.max_degree()
    if delta >= 2 and d >= 1 and len(chosen) < Fraction(G.n, (d + 1) * d * delta ** k):
        raise InvariantViolation(f"low-degree independent set of {len(chosen)} below bound")
    return chosen
