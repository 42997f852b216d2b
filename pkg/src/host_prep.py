"""
Host Preparation
Splits a host graph into slices V_0 .. V_t* and places a family of
vertex-disjoint d-cliques inside V_0, then spot-checks the two
"goodness" properties the embedding relies on.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.errors import CliqueShortfall, SliceTooSmall
from src.graph_core import Graph, RandomSource
from src.partition import Number, as_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HostPlan:
    """
    Host-side layout: slices[0] is V_0, slices[i] is V_i, and every clique
    of the family lies inside V_0.
    """

    slices: Tuple[Tuple[int, ...], ...]
    cliques: Tuple[Tuple[int, ...], ...]
    clique_size: int
    epsilon: Fraction

    @property
    def depth(self) -> int:
        return len(self.slices) - 1

    @property
    def base(self) -> Tuple[int, ...]:
        return self.slices[0]

    def clique_vertices(self) -> Set[int]:
        return {v for clique in self.cliques for v in clique}

    def slice_sizes(self) -> List[int]:
        return [len(s) for s in self.slices]


def _extend_clique(G: Graph, chosen: List[int], candidates: List[int], size: int) -> Optional[List[int]]:
    if len(chosen) == size:
        return chosen
    for idx, v in enumerate(candidates):
        if len(chosen) + len(candidates) - idx < size:
            return None
        narrowed = [w for w in candidates[idx + 1:] if G.has_edge(v, w)]
        found = _extend_clique(G, chosen + [v], narrowed, size)
        if found is not None:
            return found
    return None


def find_clique_family(G: Graph, d: int, count: int) -> List[Tuple[int, ...]]:
    """
    Greedy family of pairwise disjoint d-cliques.

    Vertices are scanned in ascending order; each unused vertex is extended
    to the lexicographically smallest d-clique among unused vertices, if
    one exists. Stops at `count` cliques.

    Args:
        G: Host graph
        d: Clique size (d=1 gives singletons, d=2 a greedy matching)
        count: Target number of cliques

    Returns:
        Up to `count` cliques, each sorted ascending
    """
    if d < 1:
        raise ValueError(f"clique size must be positive, got {d}")

    used: Set[int] = set()
    family: List[Tuple[int, ...]] = []
    for v in range(G.n):
        if len(family) >= count:
            break
        if v in used:
            continue
        candidates = sorted(w for w in G.adjacency(v) if w not in used)
        clique = _extend_clique(G, [v], candidates, d)
        if clique is None:
            continue
        family.append(tuple(sorted(clique)))
        used.update(clique)

    if len(family) < count:
        logger.debug(f"clique family: found {len(family)} of {count} disjoint {d}-cliques")
    return family


def build_host_plan(
    G: Graph,
    depth: int,
    epsilon: Number,
    d: int,
    rng: RandomSource,
    min_slice_size: int = 0,
) -> HostPlan:
    """
    Build V_0 .. V_depth and the clique family.

    Slices V_1..V_depth get max(floor(eps*n / (16*depth)), min_slice_size)
    vertices drawn uniformly from outside the clique family; V_0 absorbs
    everything else, cliques included.

    Args:
        G: Host graph
        depth: Effective partition depth t*
        epsilon: Top-layer fraction of the target partition
        d: Clique size
        rng: Random stream for slice membership
        min_slice_size: Lower bound on slice size

    Returns:
        HostPlan

    Raises:
        SliceTooSmall: slices would be empty or do not fit outside the cliques
        CliqueShortfall: fewer than floor(eps*n) disjoint d-cliques found
    """
    epsilon = as_fraction(epsilon)
    n = G.n
    slice_size = 0
    if depth > 0:
        slice_size = max(math.floor(epsilon * n / (16 * depth)), min_slice_size)
        if slice_size < 1:
            raise SliceTooSmall(slice_size, depth)

    needed = math.floor(epsilon * n)
    cliques = find_clique_family(G, d, needed)
    if len(cliques) < needed:
        raise CliqueShortfall(len(cliques), needed)

    covered = {v for clique in cliques for v in clique}
    free = np.array([v for v in range(n) if v not in covered], dtype=np.int64)
    if depth * slice_size > free.size:
        raise SliceTooSmall(slice_size, depth,
                            f"{depth} slices need {depth * slice_size} vertices, {free.size} free")

    shuffled = rng.generator().permutation(free).tolist()
    slices = [tuple(sorted(shuffled[i * slice_size:(i + 1) * slice_size])) for i in range(depth)]
    used = {v for s in slices for v in s}
    base = tuple(v for v in range(n) if v not in used)

    plan = HostPlan(
        slices=(base,) + tuple(slices),
        cliques=tuple(cliques),
        clique_size=d,
        epsilon=epsilon,
    )
    logger.debug(f"host plan: |V_0|={len(base)}, slice size {slice_size} x {depth}, {len(cliques)} cliques")
    return plan


def validate_host_plan(G: Graph, plan: HostPlan) -> List[str]:
    """
    Independent re-check of a host plan; returns a list of issues (empty when valid).
    """
    issues = []
    seen: Set[int] = set()
    for i, part in enumerate(plan.slices):
        overlap = seen.intersection(part)
        if overlap:
            issues.append(f"slice {i} overlaps earlier slices at {sorted(overlap)}")
        seen.update(part)
    if seen != set(range(G.n)):
        issues.append(f"slices miss {sorted(set(range(G.n)) - seen)}")

    sizes = plan.slice_sizes()[1:]
    if len(set(sizes)) > 1:
        issues.append(f"slices V_1.. have unequal sizes {sizes}")

    base = set(plan.base)
    taken: Set[int] = set()
    for clique in plan.cliques:
        if len(clique) != plan.clique_size:
            issues.append(f"clique {clique} has size {len(clique)}, expected {plan.clique_size}")
        if not base.issuperset(clique):
            issues.append(f"clique {clique} leaves V_0")
        if taken.intersection(clique):
            issues.append(f"clique {clique} overlaps another clique")
        taken.update(clique)
        for a in range(len(clique)):
            for b in range(a + 1, len(clique)):
                if not G.has_edge(clique[a], clique[b]):
                    issues.append(f"clique {clique} misses edge ({clique[a]}, {clique[b]})")
    return issues


@dataclass
class GoodnessReport:
    """
    Sampled pass counts for the clique-hit property and both expansion clauses.

    Keys of the expansion dictionaries are the left-set size k. A size
    class listed in `vacuous` had no admissible sample at this n and p.
    """

    clique_hits_checked: int = 0
    clique_hits_passed: int = 0
    expansion_checked: Dict[int, int] = field(default_factory=dict)
    expansion_passed: Dict[int, int] = field(default_factory=dict)
    edge_presence_checked: Dict[int, int] = field(default_factory=dict)
    edge_presence_passed: Dict[int, int] = field(default_factory=dict)
    vacuous: List[str] = field(default_factory=list)

    def pass_fraction(self) -> Optional[float]:
        """Fraction of all sampled inequalities that held, None if nothing was sampled."""
        checked = (self.clique_hits_checked + sum(self.expansion_checked.values())
                   + sum(self.edge_presence_checked.values()))
        passed = (self.clique_hits_passed + sum(self.expansion_passed.values())
                  + sum(self.edge_presence_passed.values()))
        return passed / checked if checked else None


def _common_neighbors(G: Graph, group: Sequence[int], within: Set[int]) -> Set[int]:
    if not group:
        return set(within)
    common = set(G.neighbors(group[0])) & within
    for v in group[1:]:
        common &= G.neighbors(v)
    return common


def spot_check_goodness(
    G: Graph,
    plan: HostPlan,
    p: float,
    d: int,
    samples: int,
    rng: RandomSource,
) -> GoodnessReport:
    """
    Evaluate the goodness inequalities on randomly sampled sets.

    Clique hits: for U outside the cliques with |U| <= (p/2)^-d / 2, at
    least p^d |U| |K| / 2^(d+2) cliques must lie in N(u) for some u in U.
    Expansion: for k = 1..d and |L| <= (p/2)^-k / 2 disjoint k-sets avoiding
    a slice V_i, the aux neighbourhood inside V_i has at least
    (p/2)^k |L| |V_i| / 2 vertices. Edge presence: once |L| and |U| reach
    (p/2)^-k ln^(2(d-1)) n, B(L, U) has an edge.

    Purely diagnostic; nothing here gates the embedding.
    """
    report = GoodnessReport()
    if p <= 0:
        report.vacuous.append("p = 0")
        return report

    gen = rng.generator()
    n = G.n
    half = p / 2
    clique_set = plan.clique_vertices()
    outside = np.array([v for v in range(n) if v not in clique_set], dtype=np.int64)

    limit = math.floor(half ** (-d) / 2)
    if limit < 1 or outside.size == 0 or not plan.cliques:
        report.vacuous.append("clique hits")
    else:
        cap = min(limit, outside.size)
        for _ in range(samples):
            size = int(gen.integers(1, cap + 1))
            group = gen.choice(outside, size=size, replace=False).tolist()
            hit = sum(
                1 for clique in plan.cliques
                if any(all(G.has_edge(u, x) for x in clique) for u in group)
            )
            report.clique_hits_checked += 1
            if hit >= p ** d * size * len(plan.cliques) / 2 ** (d + 2):
                report.clique_hits_passed += 1

    slices = [s for s in plan.slices[1:] if s]
    for k in range(1, d + 1):
        small = math.floor(half ** (-k) / 2)
        if small < 1 or not slices:
            report.vacuous.append(f"expansion k={k}")
        else:
            for _ in range(samples):
                target = slices[int(gen.integers(0, len(slices)))]
                pool = np.array(sorted(set(range(n)) - set(target)), dtype=np.int64)
                count = min(int(gen.integers(1, small + 1)), pool.size // k)
                if count < 1:
                    continue
                flat = gen.choice(pool, size=count * k, replace=False).tolist()
                groups = [flat[j * k:(j + 1) * k] for j in range(count)]
                reached: Set[int] = set()
                for group in groups:
                    reached |= _common_neighbors(G, group, set(target))
                report.expansion_checked[k] = report.expansion_checked.get(k, 0) + 1
                if len(reached) >= half ** k * count * len(target) / 2:
                    report.expansion_passed[k] = report.expansion_passed.get(k, 0) + 1

        large = math.ceil(half ** (-k) * math.log(n) ** (2 * (d - 1))) if n > 1 else 1
        if large * (k + 1) > n:
            report.vacuous.append(f"edge presence k={k}")
            continue
        for _ in range(samples):
            flat = gen.choice(n, size=large * (k + 1), replace=False).tolist()
            groups = [flat[j * k:(j + 1) * k] for j in range(large)]
            right = set(flat[large * k:])
            report.edge_presence_checked[k] = report.edge_presence_checked.get(k, 0) + 1
            if any(_common_neighbors(G, group, right) for group in groups):
                report.edge_presence_passed[k] = report.edge_presence_passed.get(k, 0) + 1

    if report.vacuous:
        logger.warning(f"goodness spot check: vacuous classes {report.vacuous}")
    logger.debug(f"goodness spot check: pass fraction {report.pass_fraction()}")
    return report
