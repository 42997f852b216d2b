"""
Rainbow Embedding
Finds a copy of H whose edges all carry distinct colors in a randomly
edge-colored host G = G1 u G2.

Procedure:
1. Split V(H) into a degeneracy-ordered spine and a small tail W
2. Phase I: embed the spine greedily into G1, one vertex at a time,
   exposing only a bounded candidate pool per vertex
3. Phase II: build a random k-out bipartite graph between the tail's
   neighbour images and the unused host vertices from G2 edges, and
   finish with a perfect matching
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.embed import AuxBipartite, Embedding, max_matching, verify_embedding
from src.errors import (
    DegreeDeficient,
    InfeasibleParameters,
    InvariantViolation,
    NoCandidate,
    NoPerfectMatching,
    NotInFamily,
    PoolExhausted,
    ProcessStalled,
    TailUnavailable,
)
from src.graph_core import (
    ColoredGraph,
    Edge,
    Graph,
    RandomSource,
    degeneracy_order,
    k_independent_in_subset,
    max_density,
    normalize_edge,
)

logger = logging.getLogger(__name__)


class TailKind(str, Enum):
    ISOLATED = 'isolated'
    LOW_DEGREE = 'low_degree'


def color_count(num_edges: int, alpha: float) -> int:
    """c = ceil((1 + alpha) |E(H)|), at least 1."""
    return max(1, math.ceil((1 + alpha) * num_edges))


def tail_size(n: int, alpha: float) -> int:
    """ceil(alpha n / (5 ln^2 n))."""
    return math.ceil(alpha * n / (5 * math.log(n) ** 2))


def pool_size(n: int, delta: int, alpha: float) -> int:
    """s = ceil(alpha n / (4 Delta ln n)^2)."""
    return math.ceil(alpha * n / (4 * delta * math.log(n)) ** 2)


def out_degree(n: int) -> int:
    """k = ceil(ln^2 n)."""
    return math.ceil(math.log(n) ** 2)


@dataclass(frozen=True)
class RainbowSplit:
    """
    V(H) = spine u tail. Spine vertices have at most d neighbours earlier
    in the spine. A low-degree tail is 2-independent with degrees in [1, avg_degree].

    few_tail_edges reports whether the tail sends fewer than
    alpha |E(H)| / (2 ceil(ln^2 n)) edges to the spine. It is a flag, not a
    precondition: a split with many tail edges is still returned.
    """

    spine: Tuple[int, ...]
    tail: Tuple[int, ...]
    kind: TailKind
    delta: int
    d: int
    alpha: float
    avg_degree: Fraction
    tail_edges: int
    few_tail_edges: bool


@dataclass
class RainbowState:
    """
    Bookkeeping threaded through both phases.

    removed[v] holds the vertices taken out of U_v, so
    U_v = V(G) - {v} - removed[v]. Every exposed host pair is recorded once.
    """

    n: int
    color_count: int
    pool_size: int
    embedding: Embedding = field(default_factory=Embedding)
    available_colors: Set[int] = field(default_factory=set)
    available_vertices: Set[int] = field(default_factory=set)
    removed: Dict[int, Set[int]] = field(default_factory=dict)
    exposed: Set[Edge] = field(default_factory=set)
    exposed_second: Set[Edge] = field(default_factory=set)
    retired: Set[int] = field(default_factory=set)

    @classmethod
    def start(cls, n: int, c: int, s: int) -> 'RainbowState':
        return cls(
            n=n,
            color_count=c,
            pool_size=s,
            available_colors=set(range(1, c + 1)),
            available_vertices=set(range(n)),
        )

    def unexposed_pool(self, v: int) -> Set[int]:
        """U_v."""
        return set(range(self.n)) - {v} - self.removed.get(v, set())

    def in_pool(self, v: int, x: int) -> bool:
        return x != v and x not in self.removed.get(v, ())

    def expose(self, u: int, v: int, second: bool = False) -> None:
        """Record that the pair uv of G1 (or of G2 with `second`) has been revealed."""
        ledger = self.exposed_second if second else self.exposed
        e = normalize_edge(u, v)
        if e in ledger:
            raise InvariantViolation(f"host pair {e} exposed twice")
        ledger.add(e)

    def check_ledger(self) -> None:
        committed = list(self.embedding.colors.values())
        used = set(committed)
        if len(used) != len(committed):
            raise InvariantViolation("two target edges share a color")
        if used & self.available_colors or self.retired & self.available_colors:
            raise InvariantViolation("a spent color is still marked available")
        if self.color_count - len(self.available_colors) != len(used | self.retired):
            raise InvariantViolation(
                f"color ledger off: {self.color_count - len(self.available_colors)} removed, "
                f"{len(used)} committed + {len(self.retired - used)} retired"
            )


@dataclass(frozen=True)
class KOutGround:
    """
    Ground graph F between left sets and right vertices, plus the out-degree k.

    adjacency[i] lists the right vertices admissible for left[i].
    """

    left: Tuple[Tuple[int, ...], ...]
    right: Tuple[int, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    k: int

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise InvariantViolation(f"|L| = {len(self.left)} != |V*| = {len(self.right)}")

    def min_left_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    @classmethod
    def from_adjacency(cls, adjacency: Sequence[Sequence[int]], k: int) -> 'KOutGround':
        """Abstract bipartite ground graph: left i is the singleton (i,), right is 0..len-1."""
        size = len(adjacency)
        return cls(
            left=tuple((i,) for i in range(size)),
            right=tuple(range(size)),
            adjacency=tuple(tuple(sorted(set(nbrs))) for nbrs in adjacency),
            k=k,
        )


@dataclass(frozen=True)
class RainbowCheck:
    passed: bool
    reason: str = ''
    collision: Optional[Tuple[Edge, Edge]] = None


def split_target(
    H: Graph,
    delta: int,
    d: int,
    alpha: float,
    tail_override: Optional[int] = None,
) -> RainbowSplit:
    """
    Split H into a spine and a tail of ceil(alpha n / (5 ln^2 n)) vertices.

    Isolated vertices form the tail when there are enough of them.
    Otherwise the tail is a greedy 2-independent set among vertices of
    degree in [1, 2|E(H)|/n]. The spine is a degeneracy ordering of the rest.

    Args:
        H: Target with max degree <= delta and max density <= d
        delta: Maximum degree bound
        d: Density bound
        alpha: Color slack, c = ceil((1+alpha)|E(H)|)
        tail_override: Use this tail size instead of the formula

    Raises:
        NotInFamily, TailUnavailable, InfeasibleParameters
    """
    n = H.n
    if n < 2:
        raise InfeasibleParameters("rainbow split needs at least 2 vertices")
    if alpha <= 0:
        raise InfeasibleParameters(f"alpha must be positive, got {alpha}")
    if H.max_degree() > delta:
        raise NotInFamily(f"max degree {H.max_degree()} exceeds Delta={delta}")
    if max_density(H) > d:
        raise NotInFamily(f"max density exceeds d={d}")

    required = tail_override if tail_override is not None else tail_size(n, alpha)
    if required < 1 or required > n:
        raise InfeasibleParameters(f"tail size {required} outside [1, {n}]")

    avg = Fraction(2 * H.num_edges, n)
    isolated = [v for v in range(n) if H.degree(v) == 0]
    if len(isolated) >= required:
        tail = isolated[:required]
        kind = TailKind.ISOLATED
    else:
        eligible = [v for v in range(n) if 1 <= H.degree(v) <= avg]
        independent = k_independent_in_subset(H, eligible, 2)
        if len(independent) < required:
            raise TailUnavailable(required, len(independent))
        tail = independent[:required]
        kind = TailKind.LOW_DEGREE

    tail_set = set(tail)
    spine = degeneracy_order(H, d, vertices=[v for v in range(n) if v not in tail_set])
    crossing = sum(H.degree(w) for w in tail)
    bound = alpha * H.num_edges / (2 * out_degree(n))
    few = kind is TailKind.ISOLATED or crossing < bound
    if not few:
        logger.warning(f"tail sends {crossing} edges, not below alpha|E|/(2 ceil(ln^2 n)) = {bound:.2f}")

    return RainbowSplit(
        spine=tuple(spine),
        tail=tuple(tail),
        kind=kind,
        delta=delta,
        d=d,
        alpha=alpha,
        avg_degree=avg,
        tail_edges=crossing,
        few_tail_edges=few,
    )


def phase1_embed(
    H: Graph,
    split: RainbowSplit,
    G1: ColoredGraph,
    pool_override: Optional[int] = None,
) -> RainbowState:
    """
    Greedy rainbow embedding of the spine into G1.

    For each spine vertex w with earlier images L(w), the pool
    A_w = V' n (n_{v in L(w)} U_v) is cut to its s lowest vertices S_w,
    pairs L(w) x S_w are exposed, and w goes to the lowest x in S_w whose
    edges to L(w) exist with distinct available colors.

    Args:
        H: Target graph
        split: Spine/tail split of H
        G1: First colored host half
        pool_override: Use this pool size s instead of the formula

    Returns:
        RainbowState with the spine embedded

    Raises:
        PoolExhausted, NoCandidate, InvariantViolation
    """
    n = H.n
    if G1.base.n != n:
        raise ValueError(f"host has {G1.base.n} vertices, target has {n}")
    s = pool_override if pool_override is not None else pool_size(n, split.delta, split.alpha)
    state = RainbowState.start(n, G1.color_count, s)
    f = state.embedding
    tail_needed = len(split.tail)

    for step, w in enumerate(split.spine):
        earlier = [u for u in H.adjacency(w) if u in f.mapping]
        images = [f.mapping[u] for u in earlier]

        if not images:
            if not state.available_vertices:
                raise PoolExhausted(w, step)
            x = min(state.available_vertices)
            f.assign(0, [(w, x)])
            state.available_vertices.discard(x)
            continue

        pool = sorted(x for x in state.available_vertices if all(state.in_pool(v, x) for v in images))
        if len(state.available_vertices) >= tail_needed:
            floor = len(state.available_vertices) - split.delta - split.delta ** 2 * s
            if len(pool) < floor:
                raise InvariantViolation(f"pool of {w} has {len(pool)} vertices, below {floor}")
        if not pool:
            raise PoolExhausted(w, step)

        sample = pool[:s]
        for v in images:
            for x in sample:
                state.expose(v, x)

        chosen = None
        for x in sample:
            if not all(G1.has_edge(v, x) for v in images):
                continue
            colors = [G1.color(v, x) for v in images]
            if len(set(colors)) == len(colors) and all(col in state.available_colors for col in colors):
                chosen = (x, colors)
                break
        if chosen is None:
            raise NoCandidate(w, step, len(sample))

        x, colors = chosen
        f.assign(0, [(w, x)])
        for u, col in zip(earlier, colors):
            f.colors[normalize_edge(u, w)] = col
        for v in images:
            state.removed.setdefault(v, set()).update(sample)
        state.available_vertices.discard(x)
        state.available_colors.difference_update(colors)
        state.check_ledger()

    logger.debug(f"phase I: spine of {len(split.spine)} embedded, "
                 f"{len(state.available_colors)}/{state.color_count} colors left, "
                 f"{len(state.exposed)} pairs exposed")
    return state


def build_kout_ground(H: Graph, split: RainbowSplit, state: RainbowState, G1: ColoredGraph, k: int) -> KOutGround:
    """
    F between L(w) = f(N_H(w)) for tail vertices w (ascending) and the unused
    host vertices V*; (L, v) is a ground edge iff no u in L has uv in G1.
    """
    f = state.embedding.mapping
    right = tuple(sorted(set(range(H.n)) - set(f.values())))
    left = []
    adjacency = []
    for w in split.tail:
        group = tuple(sorted(f[u] for u in H.adjacency(w)))
        left.append(group)
        adjacency.append(tuple(v for v in right if not any(G1.has_edge(u, v) for u in group)))
    return KOutGround(tuple(left), right, tuple(adjacency), k)


def sample_k_out(F: KOutGround, k: int, rng: RandomSource) -> AuxBipartite:
    """
    Uniform member of the k-out family: each left element keeps a uniformly
    random k-subset of its ground edges.

    Raises:
        DegreeDeficient: a left element has fewer than k ground edges
    """
    gen = rng.generator()
    adjacency = []
    for i, nbrs in enumerate(F.adjacency):
        if len(nbrs) < k:
            raise DegreeDeficient(i, len(nbrs), k)
        picks = gen.choice(len(nbrs), size=k, replace=False)
        adjacency.append(tuple(sorted(nbrs[j] for j in picks.tolist())))
    return AuxBipartite(F.left, F.right, tuple(adjacency))


def phase2_extend(
    H: Graph,
    split: RainbowSplit,
    state: RainbowState,
    G1: ColoredGraph,
    G2: ColoredGraph,
    rng: RandomSource,
    k_override: Optional[int] = None,
) -> Embedding:
    """
    Embed the tail using G2 edges and a perfect matching.

    An isolated tail is assigned to V* in ascending order. Otherwise, for
    each L_i in turn, candidates v in N_F(L_i) are drawn uniformly without
    replacement; (L_i, v) is accepted iff every pair L_i x {v} is a G2 edge
    and their colors are distinct and available. After k acceptances the
    colors of all accepted edges at L_i are retired.

    Raises:
        ProcessStalled, NoPerfectMatching, InvariantViolation
    """
    f = state.embedding
    final_step = 1
    right = sorted(set(range(H.n)) - f.image())
    if len(right) != len(split.tail):
        raise InvariantViolation(f"|W| = {len(split.tail)} but |V*| = {len(right)}")

    if split.kind is TailKind.ISOLATED:
        f.assign(final_step, list(zip(split.tail, right)))
        logger.debug(f"phase II: isolated tail of {len(right)} assigned directly")
        return f

    n = H.n
    k = k_override if k_override is not None else out_degree(n)
    F = build_kout_ground(H, split, state, G1, k)

    color_floor = None
    if k * split.tail_edges <= split.alpha * H.num_edges / 2:
        color_floor = math.ceil(split.alpha * H.num_edges / 2)

    gen = rng.generator()
    sampled: List[Tuple[int, ...]] = []
    accepted_colors: Dict[Tuple[int, int], Dict[int, int]] = {}
    for i, (group, nbrs) in enumerate(zip(F.left, F.adjacency)):
        accepted: List[int] = []
        spent: Set[int] = set()
        for j in gen.permutation(len(nbrs)).tolist():
            v = nbrs[j]
            for u in group:
                state.expose(u, v, second=True)
            if not all(G2.has_edge(u, v) for u in group):
                continue
            colors = [G2.color(u, v) for u in group]
            if len(set(colors)) != len(colors) or not all(c in state.available_colors for c in colors):
                continue
            accepted.append(v)
            spent.update(colors)
            accepted_colors[(i, v)] = dict(zip(group, colors))
            if len(accepted) == k:
                break
        if len(accepted) < k:
            raise ProcessStalled(i, len(accepted), k)

        state.available_colors.difference_update(spent)
        state.retired.update(spent)
        state.check_ledger()
        if color_floor is not None and len(state.available_colors) < color_floor:
            raise InvariantViolation(f"{len(state.available_colors)} colors left, below {color_floor}")
        sampled.append(tuple(sorted(accepted)))

    B = AuxBipartite(F.left, F.right, tuple(sampled))
    result = max_matching(B, len(F.left))
    if not result.saturating:
        raise NoPerfectMatching(result.witness, len(F.left))

    inverse = {g: h for h, g in f.mapping.items()}
    pairs = []
    for i, w in enumerate(split.tail):
        v = result.pairs[i]
        pairs.append((w, v))
        for u, col in accepted_colors[(i, v)].items():
            f.colors[normalize_edge(inverse[u], w)] = col
    f.assign(final_step, pairs)
    logger.debug(f"phase II: tail of {len(pairs)} matched, {len(state.available_colors)} colors left")
    return f


def verify_rainbow(H: Graph, G: ColoredGraph, embedding: Embedding) -> RainbowCheck:
    """
    verify_embedding plus pairwise-distinct host colors over all mapped H-edges.

    Recorded colors, when present, must agree with the host coloring.
    """
    check = verify_embedding(H, G.base, embedding.mapping)
    if not check.passed:
        return RainbowCheck(False, check.reason)

    f = embedding.mapping
    first_use: Dict[int, Edge] = {}
    for e in H.sorted_edges():
        col = G.color(f[e[0]], f[e[1]])
        recorded = embedding.colors.get(e)
        if recorded is not None and recorded != col:
            return RainbowCheck(False, f"edge {e} recorded color {recorded}, host has {col}")
        if col in first_use:
            return RainbowCheck(False, f"color {col} used twice", (first_use[col], e))
        first_use[col] = e
    return RainbowCheck(True)


def run_rainbow_pipeline(
    H: Graph,
    G1: ColoredGraph,
    G2: ColoredGraph,
    delta: int,
    d: int,
    alpha: float,
    rng: RandomSource,
    pool_override: Optional[int] = None,
    tail_override: Optional[int] = None,
    k_override: Optional[int] = None,
) -> Embedding:
    """
    Split, Phase I, Phase II, then verify against the overlay G1 u G2.

    Raises:
        Any RainbowError, or InvariantViolation if a finished map is not rainbow
    """
    split = split_target(H, delta, d, alpha, tail_override)
    state = phase1_embed(H, split, G1, pool_override)
    embedding = phase2_extend(H, split, state, G1, G2, rng.child('phase2'), k_override)

    check = verify_rainbow(H, ColoredGraph.overlay(G1, G2), embedding)
    if not check.passed:
        raise InvariantViolation(f"rainbow pipeline produced an invalid copy: {check.reason}")
    logger.info(f"rainbow copy found: n={H.n}, |E(H)|={H.num_edges}, tail={split.kind.value}")
    return embedding
