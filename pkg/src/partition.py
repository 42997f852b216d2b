"""
Layered Partitions
Builds and re-checks partitions V(H) = W_0 u W_1 u ... u W_t of a target graph.

Properties of a valid partition:
(i)   |W_t| = floor(eps * n)
(ii)  W_0 = N(W_t)
(iii) W_t is 3-independent
(iv)  every middle layer is 2-independent
(v)   every vertex outside W_0 has at most `cap` neighbours in earlier layers

Layers are stored compactly: W_0, then the nonempty peeled layers in
embedding order, then W_t last. The formula depth is kept separately.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from src.errors import (
    EpsilonTooSmall,
    GirthTooSmall,
    InvariantViolation,
    NotInFamily,
    PeelStalled,
    WtTooSmall,
)
from src.graph_core import (
    Graph,
    find_close_pair,
    k_independent_in_subset,
    k_independent_low_degree,
    max_density,
    shortest_cycle,
)

logger = logging.getLogger(__name__)

Number = Union[int, float, str, Fraction]


def as_fraction(value: Number) -> Fraction:
    """Exact rational for an epsilon given as float, string or Fraction."""
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class LayeredPartition:
    """
    A partition W_0 .. W_t in compact form.

    layers[0] is W_0, layers[-1] is W_t, and layers[1:-1] are the nonempty
    peeled layers ordered so that each only looks back at lower indices.
    """

    layers: Tuple[Tuple[int, ...], ...]
    epsilon: Fraction
    back_degree_cap: int
    nominal_depth: int
    construction: str = 'general'
    peel_cases: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def effective_depth(self) -> int:
        """t*: number of nonempty peeled layers."""
        return len(self.layers) - 2

    @property
    def base(self) -> Tuple[int, ...]:
        return self.layers[0]

    @property
    def top(self) -> Tuple[int, ...]:
        return self.layers[-1]

    @property
    def peeled(self) -> Tuple[Tuple[int, ...], ...]:
        return self.layers[1:-1]

    @property
    def n(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def layer_index(self) -> Dict[int, int]:
        """Vertex -> compact layer index."""
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def earlier_neighbors(self, H: Graph, index: int, v: int) -> Tuple[int, ...]:
        """L(v): neighbours of v in layers[0 .. index-1], ascending."""
        earlier = set().union(*self.layers[:index]) if index > 0 else set()
        return tuple(w for w in H.adjacency(v) if w in earlier)

    def sizes(self) -> List[int]:
        return [len(layer) for layer in self.layers]


@dataclass
class PartitionReport:
    """
    Outcome of an independent re-check. Each failed property keeps a witness.
    """

    covers: bool = True
    cover_issue: Optional[str] = None
    top_size: bool = True
    top_size_issue: Optional[Tuple[int, int]] = None
    base_is_neighborhood: bool = True
    base_issue: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None
    top_independent: bool = True
    top_pair: Optional[Tuple[int, int, int]] = None
    layers_independent: bool = True
    layer_pair: Optional[Tuple[int, int, int, int]] = None
    back_degree: bool = True
    back_degree_witness: Optional[Tuple[int, int, int]] = None

    @property
    def passed(self) -> bool:
        return all([
            self.covers,
            self.top_size,
            self.base_is_neighborhood,
            self.top_independent,
            self.layers_independent,
            self.back_degree,
        ])

    def failures(self) -> List[str]:
        """Readable list of failed properties with their witnesses."""
        issues = []
        if not self.covers:
            issues.append(f"layers do not partition V(H): {self.cover_issue}")
        if not self.top_size:
            issues.append(f"(i) |W_t| = {self.top_size_issue[0]}, expected {self.top_size_issue[1]}")
        if not self.base_is_neighborhood:
            missing, extra = self.base_issue
            issues.append(f"(ii) W_0 != N(W_t): missing {list(missing)}, extra {list(extra)}")
        if not self.top_independent:
            u, w, dist = self.top_pair
            issues.append(f"(iii) W_t vertices {u}, {w} at distance {dist}")
        if not self.layers_independent:
            layer, u, w, dist = self.layer_pair
            issues.append(f"(iv) layer {layer} vertices {u}, {w} at distance {dist}")
        if not self.back_degree:
            v, count, cap = self.back_degree_witness
            issues.append(f"(v) vertex {v} has {count} earlier neighbours, cap {cap}")
        return issues


def general_depth(n: int, delta: int) -> int:
    """Nominal depth ceil(4 Delta^6 ln n) + 1."""
    return math.ceil(4 * delta ** 6 * math.log(n)) + 1 if n > 1 else 1


def girth7_depth(n: int, delta: int, d: int) -> int:
    """Nominal depth ceil(16 d^2 Delta^2 ln n) + 1."""
    return math.ceil(16 * d * d * delta ** 2 * math.log(n)) + 1 if n > 1 else 1


def peel_fraction(delta: int, d: int) -> Fraction:
    """gamma = 1 / (8 (d+1)(d-1) Delta^2), the per-layer fraction for girth >= 7 targets."""
    return Fraction(1, 8 * (d + 1) * (d - 1) * delta * delta)


def _check_family(H: Graph, delta: int, d: int) -> None:
    if d < 2 or delta < 2:
        raise NotInFamily(f"need d >= 2 and Delta >= 2, got d={d}, Delta={delta}")
    if H.n < 1:
        raise NotInFamily("target graph is empty")
    if H.max_degree() > delta:
        raise NotInFamily(f"max degree {H.max_degree()} exceeds Delta={delta}")
    density = max_density(H)
    if density > d:
        raise NotInFamily(f"max density {density} exceeds d={d}")


def _choose_top(H: Graph, d: int, radius: int, epsilon: Fraction) -> Tuple[List[int], int]:
    required = math.floor(epsilon * H.n)
    if required < 1:
        raise EpsilonTooSmall(epsilon, H.n)
    candidates = k_independent_low_degree(H, d, radius)
    if len(candidates) < required:
        raise WtTooSmall(required, len(candidates))
    logger.debug(f"top layer: {required} of {len(candidates)} {radius}-independent candidates")
    return candidates[:required], len(candidates)


def partition_general(H: Graph, delta: int, d: int, epsilon: Number) -> LayeredPartition:
    """
    Partition a target of maximum degree Delta and density at most d.

    W_t is the lowest-index prefix of a greedy 4-independent subset of
    D_{<=d}(H), W_0 = N(W_t), and the rest is peeled off in 2-independent
    layers of low-degree vertices. The back-degree cap is 2d.

    Args:
        H: Target graph
        delta: Maximum degree bound
        d: Density bound (d >= 2)
        epsilon: Top-layer fraction; floor(eps * n) must be positive

    Returns:
        LayeredPartition with cap 2d

    Raises:
        NotInFamily, EpsilonTooSmall, WtTooSmall, PeelStalled
    """
    _check_family(H, delta, d)
    epsilon = as_fraction(epsilon)
    nominal = general_depth(H.n, delta)

    if (d + 1) * d > 4 * delta * delta:
        logger.warning(f"(d+1)d = {(d + 1) * d} > 4 Delta^2 = {4 * delta * delta}; "
                       f"top-layer size chain does not hold at these parameters")

    top, _ = _choose_top(H, d, 4, epsilon)
    base = sorted(H.neighborhood(top))
    remaining = set(range(H.n)) - set(top) - set(base)

    peeled: List[Tuple[int, ...]] = []
    shrink = Fraction(1, 4 * delta ** 6)
    while remaining:
        if len(peeled) >= nominal - 1:
            raise PeelStalled(len(peeled) + 1, len(remaining))
        low = H.vertices_with_degree_at_most(d, within=remaining)
        layer = k_independent_in_subset(H, low, 2)
        if not layer:
            raise PeelStalled(len(peeled) + 1, len(remaining))
        before = len(remaining)
        remaining -= set(layer)
        if math.floor(shrink * H.n) >= 1 and len(remaining) > (1 - shrink) * before:
            logger.warning(f"layer {len(peeled) + 1} shrank {before} -> {len(remaining)}, "
                           f"slower than 1 - eps_0")
        peeled.append(tuple(layer))

    layers = (tuple(base),) + tuple(reversed(peeled)) + (tuple(top),)
    partition = LayeredPartition(
        layers=layers,
        epsilon=epsilon,
        back_degree_cap=2 * d,
        nominal_depth=nominal,
        construction='general',
        peel_cases=tuple('low' for _ in peeled),
    )
    logger.info(f"general partition: n={H.n}, |W_t|={len(top)}, |W_0|={len(base)}, "
                f"t*={partition.effective_depth}, nominal t={nominal}")
    return partition


def partition_girth7(H: Graph, delta: int, d: int, epsilon: Number) -> LayeredPartition:
    """
    Partition a target of girth at least 7 with back-degree cap d.

    W_t comes from a 6-independent low-degree set, so each vertex outside
    W_0 has at most one neighbour in W_0. Each peel first tries a
    2-independent set inside D_{<=d-1}(H_i) of size at least gamma*|H_i|;
    otherwise it picks from D_{<=d}(H_i) minus X = N(W_0).

    Raises:
        GirthTooSmall, NotInFamily, EpsilonTooSmall, WtTooSmall, PeelStalled
    """
    cycle = shortest_cycle(H)
    if cycle is not None and len(cycle) < 7:
        raise GirthTooSmall(len(cycle), cycle)
    _check_family(H, delta, d)
    epsilon = as_fraction(epsilon)
    nominal = girth7_depth(H.n, delta, d)
    gamma = peel_fraction(delta, d)

    top, _ = _choose_top(H, d, 6, epsilon)
    base = sorted(H.neighborhood(top))
    base_set = set(base)
    outside = H.neighborhood(base)
    remaining = set(range(H.n)) - set(top) - base_set

    for v in remaining:
        hits = sum(1 for w in H.adjacency(v) if w in base_set)
        if hits > 1:
            raise InvariantViolation(f"vertex {v} has {hits} neighbours in W_0")

    exposed = outside & remaining
    close = find_close_pair(H.induced(remaining), exposed, 2)
    if close is not None:
        logger.warning(f"N(W_0) not 2-independent in the remainder: {close}")

    peeled: List[Tuple[int, ...]] = []
    cases: List[str] = []
    while remaining:
        if len(peeled) >= nominal - 1:
            raise PeelStalled(len(peeled) + 1, len(remaining))
        size = len(remaining)

        lighter = k_independent_in_subset(H, H.vertices_with_degree_at_most(d - 1, within=remaining), 2)
        if lighter and len(lighter) >= gamma * size:
            layer, case = lighter, 'light'
        else:
            low = [v for v in H.vertices_with_degree_at_most(d, within=remaining) if v not in exposed]
            layer, case = k_independent_in_subset(H, low, 2), 'avoid'
            if not layer and lighter:
                layer, case = lighter, 'light'
            if not layer:
                raise PeelStalled(len(peeled) + 1, size)
            if len(layer) < gamma * size:
                logger.debug(f"layer {len(peeled) + 1}: {len(layer)} < gamma*{size}")

        remaining -= set(layer)
        peeled.append(tuple(layer))
        cases.append(case)

    layers = (tuple(base),) + tuple(reversed(peeled)) + (tuple(top),)
    partition = LayeredPartition(
        layers=layers,
        epsilon=epsilon,
        back_degree_cap=d,
        nominal_depth=nominal,
        construction='girth7',
        peel_cases=tuple(reversed(cases)),
    )
    logger.info(f"girth-7 partition: n={H.n}, |W_t|={len(top)}, |W_0|={len(base)}, "
                f"t*={partition.effective_depth}, nominal t={nominal}")
    return partition


def validate_partition(H: Graph, P: LayeredPartition) -> PartitionReport:
    """
    Re-check every property from scratch with distance queries and counting.

    Args:
        H: Target graph
        P: Partition to check (layers must cover V(H))

    Returns:
        PartitionReport, passed iff all properties hold
    """
    report = PartitionReport()

    seen: Set[int] = set()
    for i, layer in enumerate(P.layers):
        for v in layer:
            if v in seen:
                report.covers = False
                report.cover_issue = f"vertex {v} appears twice (layer {i})"
            seen.add(v)
    if report.covers and seen != set(range(H.n)):
        report.covers = False
        report.cover_issue = f"missing {sorted(set(range(H.n)) - seen)}, stray {sorted(seen - set(range(H.n)))}"

    expected = math.floor(P.epsilon * H.n)
    if len(P.top) != expected:
        report.top_size = False
        report.top_size_issue = (len(P.top), expected)

    nbhd = H.neighborhood(P.top)
    base = set(P.base)
    if nbhd != base:
        report.base_is_neighborhood = False
        report.base_issue = (tuple(sorted(nbhd - base)), tuple(sorted(base - nbhd)))

    pair = find_close_pair(H, P.top, 3)
    if pair is not None:
        report.top_independent = False
        report.top_pair = pair

    for i, layer in enumerate(P.peeled, start=1):
        pair = find_close_pair(H, layer, 2)
        if pair is not None:
            report.layers_independent = False
            report.layer_pair = (i,) + pair
            break

    earlier: Set[int] = set(P.base)
    for layer in P.layers[1:]:
        for v in layer:
            count = H.degree_within(v, earlier)
            if count > P.back_degree_cap and report.back_degree:
                report.back_degree = False
                report.back_degree_witness = (v, count, P.back_degree_cap)
        earlier.update(layer)

    if not report.passed:
        logger.debug(f"partition check failed: {report.failures()}")
    return report
