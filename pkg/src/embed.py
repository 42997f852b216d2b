"""
Matching-Based Embedding
Embeds a layered target H into a prepared host G one layer at a time:

Step 0:      W_0 goes into the clique family, one clique per top vertex
Step 1..t*:  each peeled layer is matched into V_0..V_i minus the image so far
Step t*+1:   W_t is perfectly matched into every unused host vertex

Each step builds the auxiliary bipartite graph B(L, U) where a left set L
(the images of a vertex's earlier neighbours) is adjacent to u iff
L is contained in N_G(u).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.errors import (
    CliqueAssignmentFailure,
    CliqueShortfall,
    HallViolation,
    InvalidPartition,
    OverlappingTuples,
    PlanTooShallow,
)
from src.graph_core import Edge, Graph, RandomSource
from src.host_prep import HostPlan
from src.matching import HopcroftKarp
from src.partition import LayeredPartition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AuxBipartite:
    """B(L, U): left sets, right vertices and, per left set, its adjacent right vertices."""

    left_sets: Tuple[Tuple[int, ...], ...]
    right: Tuple[int, ...]
    adjacency: Tuple[Tuple[int, ...], ...]

    def edges(self) -> List[Tuple[int, int]]:
        """(left index, right vertex) pairs."""
        return [(i, u) for i, nbrs in enumerate(self.adjacency) for u in nbrs]

    def neighborhood(self, left_indices: Sequence[int]) -> Set[int]:
        result: Set[int] = set()
        for i in left_indices:
            result.update(self.adjacency[i])
        return result


@dataclass(frozen=True)
class HallWitness:
    """Left indices whose joint neighbourhood is smaller than the set itself."""

    step: int
    left_indices: Tuple[int, ...]
    neighborhood: Tuple[int, ...]

    @property
    def deficiency(self) -> int:
        return len(self.left_indices) - len(self.neighborhood)

    def recount(self, aux: AuxBipartite) -> bool:
        """Recompute N(S) from the aux graph; True iff |N(S)| < |S| really holds."""
        return len(aux.neighborhood(self.left_indices)) < len(self.left_indices)


@dataclass(frozen=True)
class MatchingResult:
    pairs: Dict[int, int]
    saturating: bool
    witness: Optional[HallWitness] = None

    @property
    def size(self) -> int:
        return len(self.pairs)


@dataclass
class Embedding:
    """
    Injective map from target vertices to host vertices.

    layer_log[i] holds the (target, host) pairs fixed at step i. `colors`
    is filled only by the rainbow procedure.
    """

    mapping: Dict[int, int] = field(default_factory=dict)
    layer_log: List[List[Tuple[int, int]]] = field(default_factory=list)
    colors: Dict[Edge, int] = field(default_factory=dict)

    def image(self) -> Set[int]:
        return set(self.mapping.values())

    def assign(self, step: int, pairs: Sequence[Tuple[int, int]]) -> None:
        while len(self.layer_log) <= step:
            self.layer_log.append([])
        for h, g in pairs:
            self.mapping[h] = g
            self.layer_log[step].append((h, g))

    def is_total(self, n: int) -> bool:
        return len(self.mapping) == n


@dataclass(frozen=True)
class EmbeddingCheck:
    passed: bool
    reason: str = ''
    edge: Optional[Edge] = None


def build_aux(G: Graph, left_sets: Sequence[Sequence[int]], right: Sequence[int]) -> AuxBipartite:
    """
    Build B(L, U). The empty left set is adjacent to every right vertex.

    Raises:
        OverlappingTuples: two left sets share a vertex
    """
    owner: Dict[int, int] = {}
    tuples = tuple(tuple(sorted(L)) for L in left_sets)
    for i, L in enumerate(tuples):
        for v in L:
            if v in owner:
                raise OverlappingTuples(tuples[owner[v]], L)
            owner[v] = i

    right_sorted = tuple(sorted(set(right)))
    right_set = set(right_sorted)
    adjacency = []
    for L in tuples:
        if not L:
            adjacency.append(right_sorted)
            continue
        common = set(G.neighbors(L[0])) & right_set
        for v in L[1:]:
            common &= G.neighbors(v)
        adjacency.append(tuple(sorted(common)))
    return AuxBipartite(tuples, right_sorted, tuple(adjacency))


def max_matching(B: AuxBipartite, step: int = 0, rng: Optional[np.random.Generator] = None) -> MatchingResult:
    """
    Maximum matching of B; a Hall witness when the left side is not saturated.

    Args:
        B: Auxiliary bipartite graph
        step: Step index recorded in the witness
        rng: When given, shuffles the order right vertices are tried in

    Returns:
        MatchingResult with pairs left index -> right vertex
    """
    adjacency = [list(nbrs) for nbrs in B.adjacency]
    if rng is not None:
        for nbrs in adjacency:
            rng.shuffle(nbrs)

    matcher = HopcroftKarp(adjacency)
    pairs = matcher.maximum_matching()
    if len(pairs) == len(B.left_sets):
        return MatchingResult(pairs, True)

    left, right = matcher.hall_witness()
    witness = HallWitness(step, tuple(left), tuple(right))
    return MatchingResult(pairs, False, witness)


def _match_layer(
    G: Graph,
    f: Embedding,
    vertices: Sequence[int],
    back: Dict[int, Tuple[int, ...]],
    right: Sequence[int],
    step: int,
    gen: Optional[np.random.Generator],
) -> None:
    left_sets = [tuple(f.mapping[u] for u in back[w]) for w in vertices]
    try:
        aux = build_aux(G, left_sets, right)
    except OverlappingTuples as exc:
        raise InvalidPartition(step, f"earlier-neighbour sets overlap: {exc}")

    result = max_matching(aux, step, gen)
    if not result.saturating:
        logger.debug(f"step {step}: matched {result.size}/{len(vertices)}, "
                     f"witness deficiency {result.witness.deficiency}")
        raise HallViolation(step, result.witness)
    f.assign(step, [(w, result.pairs[i]) for i, w in enumerate(vertices)])
    logger.debug(f"step {step}: matched {len(vertices)} vertices into {len(aux.right)} candidates")


def embed(
    H: Graph,
    P: LayeredPartition,
    G: Graph,
    plan: HostPlan,
    rng: Optional[RandomSource] = None,
) -> Embedding:
    """
    Embed H into G following the layers of P and the host plan.

    Args:
        H: Target graph
        P: Valid layered partition of H
        G: Host graph on the same number of vertices
        plan: Host plan for G with depth >= P.effective_depth
        rng: Optional stream; only shuffles the order candidates are scanned in

    Returns:
        A total Embedding

    Raises:
        PlanTooShallow, CliqueShortfall, CliqueAssignmentFailure,
        InvalidPartition, HallViolation
    """
    if G.n != H.n:
        raise ValueError(f"host has {G.n} vertices, target has {H.n}")
    depth = P.effective_depth
    if plan.depth < depth:
        raise PlanTooShallow(plan.depth, depth)
    top = sorted(P.top)
    if len(plan.cliques) < len(top):
        raise CliqueShortfall(len(plan.cliques), len(top))

    gen = rng.generator() if rng is not None else None
    f = Embedding()

    # step 0: W_0 into the cliques
    base = set(P.base)
    owner: Dict[int, int] = {}
    for w in top:
        for u in H.adjacency(w):
            if u not in base:
                raise InvalidPartition(0, f"top vertex {w} has neighbour {u} outside W_0")
            if u in owner:
                raise InvalidPartition(0, f"W_0 vertex {u} is adjacent to top vertices {owner[u]} and {w}")
            owner[u] = w
    unowned = base - set(owner)
    if unowned:
        raise InvalidPartition(0, f"W_0 vertices {sorted(unowned)[:5]} have no top neighbour")
    for u in base:
        for x in H.adjacency(u):
            if x in owner and owner[x] != owner[u]:
                raise InvalidPartition(0, f"edge ({u}, {x}) joins the neighbourhoods of "
                                          f"{owner[u]} and {owner[x]}")

    pairs = []
    for j, w in enumerate(top):
        group = H.adjacency(w)
        clique = plan.cliques[j]
        if len(group) > len(clique):
            raise CliqueAssignmentFailure(0, w, f"|L(w)| = {len(group)} > clique size {len(clique)}")
        pairs.extend(zip(group, clique))
    f.assign(0, pairs)

    # steps 1..t*: peeled layers into V_0..V_i minus the image
    index = P.layer_index()
    allowed: Set[int] = set(plan.slices[0])
    for step in range(1, depth + 1):
        allowed.update(plan.slices[step])
        layer = sorted(P.layers[step])
        back = {w: tuple(u for u in H.adjacency(w) if index[u] < step) for w in layer}
        right = sorted(allowed - f.image())
        _match_layer(G, f, layer, back, right, step, gen)

    # final step: W_t into everything unused
    final = depth + 1
    back = {w: H.adjacency(w) for w in top}
    right = sorted(set(range(G.n)) - f.image())
    _match_layer(G, f, top, back, right, final, gen)

    logger.debug(f"embedded {H.n} vertices in {final + 1} steps")
    return f


def verify_embedding(H: Graph, G: Graph, mapping: Dict[int, int]) -> EmbeddingCheck:
    """
    Check totality, injectivity and edge preservation of a map V(H) -> V(G).
    """
    missing = [v for v in range(H.n) if v not in mapping]
    if missing:
        return EmbeddingCheck(False, f"vertex {missing[0]} is unmapped")

    seen: Dict[int, int] = {}
    for h in range(H.n):
        g = mapping[h]
        if not 0 <= g < G.n:
            return EmbeddingCheck(False, f"vertex {h} maps outside the host ({g})")
        if g in seen:
            return EmbeddingCheck(False, f"vertices {seen[g]} and {h} both map to {g}")
        seen[g] = h

    for u, v in H.sorted_edges():
        if not G.has_edge(mapping[u], mapping[v]):
            return EmbeddingCheck(False, f"edge ({u}, {v}) maps to non-edge", (u, v))
    return EmbeddingCheck(True)
