"""
Exception hierarchy for the embedding toolkit.

Every failure named by the algorithms carries its witness as attributes so
callers (tests, the sweep runner) can re-check it instead of parsing messages.
"""

from typing import Any, Optional, Sequence, Tuple


class EmbedLabError(Exception):
    """Base class for all toolkit errors."""


class InvariantViolation(EmbedLabError):
    """A runtime-asserted property failed. Indicates a bug, never a trial outcome."""


class InfeasibleParameters(EmbedLabError):
    """Generator or experiment parameters cannot be satisfied."""


# graph-core

class PreconditionViolated(EmbedLabError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class DegreeCapViolated(PreconditionViolated):
    def __init__(self, vertex: int, degree: int, cap: int):
        super().__init__(f"vertex {vertex} has degree {degree} > cap {cap}")
        self.vertex = vertex
        self.degree = degree
        self.cap = cap


class NotDDegenerate(EmbedLabError):
    def __init__(self, d: int, witness: Sequence[int]):
        super().__init__(
            f"graph is not {d}-degenerate; {len(witness)} vertices induce min degree > {d}"
        )
        self.d = d
        self.witness = frozenset(witness)


# partition

class PartitionError(EmbedLabError):
    """Layered partition could not be built."""


class NotInFamily(PartitionError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class EpsilonTooSmall(PartitionError):
    def __init__(self, epsilon: Any, n: int):
        super().__init__(f"floor(eps*n) = 0 for eps={epsilon}, n={n}")
        self.epsilon = epsilon
        self.n = n


class WtTooSmall(PartitionError):
    def __init__(self, required: int, achievable: int):
        super().__init__(
            f"top layer needs {required} vertices, independent set only has {achievable}"
        )
        self.required = required
        self.achievable = achievable


class PeelStalled(PartitionError):
    def __init__(self, layer: int, remaining: int):
        super().__init__(f"peeling stalled at layer {layer} with {remaining} vertices left")
        self.layer = layer
        self.remaining = remaining


class GirthTooSmall(PartitionError):
    def __init__(self, girth: int, cycle: Sequence[int]):
        super().__init__(f"girth {girth} < 7 (cycle {list(cycle)})")
        self.girth = girth
        self.cycle = tuple(cycle)


# host-prep

class HostPrepError(EmbedLabError):
    """Host plan could not be built."""


class SliceTooSmall(HostPrepError):
    def __init__(self, slice_size: int, depth: int, reason: str = ''):
        super().__init__(
            f"slice size {slice_size} unusable for depth {depth}" + (f": {reason}" if reason else '')
        )
        self.slice_size = slice_size
        self.depth = depth


class CliqueShortfall(HostPrepError):
    def __init__(self, found: int, needed: int):
        super().__init__(f"found {found} disjoint cliques, needed {needed}")
        self.found = found
        self.needed = needed


# embed

class EmbeddingError(EmbedLabError):
    """Matching-based embedding failed."""

    step: int = 0


class OverlappingTuples(EmbeddingError):
    def __init__(self, first: Tuple[int, ...], second: Tuple[int, ...]):
        super().__init__(f"left sets {first} and {second} intersect")
        self.first = first
        self.second = second


class PlanTooShallow(EmbeddingError):
    def __init__(self, plan_depth: int, partition_depth: int):
        super().__init__(f"host plan depth {plan_depth} < partition depth {partition_depth}")
        self.plan_depth = plan_depth
        self.partition_depth = partition_depth


class HallViolation(EmbeddingError):
    def __init__(self, step: int, witness: Any):
        super().__init__(
            f"no saturating matching at step {step}: "
            f"{len(witness.left_indices)} left sets see {len(witness.neighborhood)} vertices"
        )
        self.step = step
        self.witness = witness


class CliqueAssignmentFailure(EmbeddingError):
    def __init__(self, step: int, vertex: int, reason: str):
        super().__init__(f"cannot place neighbourhood of {vertex}: {reason}")
        self.step = step
        self.vertex = vertex
        self.reason = reason


class InvalidPartition(EmbeddingError):
    def __init__(self, step: int, reason: str):
        super().__init__(f"partition invalid at step {step}: {reason}")
        self.step = step
        self.reason = reason


# rainbow

class RainbowError(EmbedLabError):
    """Rainbow procedure failed."""

    step: int = 0


class TailUnavailable(RainbowError):
    def __init__(self, required: int, achievable: int):
        super().__init__(f"tail needs {required} vertices, only {achievable} available")
        self.required = required
        self.achievable = achievable


class PoolExhausted(RainbowError):
    def __init__(self, vertex: int, step: int = 0):
        super().__init__(f"no unexposed available vertex for {vertex}")
        self.vertex = vertex
        self.step = step


class NoCandidate(RainbowError):
    def __init__(self, vertex: int, step: int = 0, sampled: int = 0):
        super().__init__(f"none of {sampled} sampled vertices can host {vertex}")
        self.vertex = vertex
        self.step = step
        self.sampled = sampled


class DegreeDeficient(RainbowError):
    def __init__(self, left: int, degree: int, k: Optional[int] = None):
        super().__init__(f"left element {left} has ground degree {degree} < {k}")
        self.left = left
        self.degree = degree
        self.k = k


class ProcessStalled(RainbowError):
    def __init__(self, step: int, accepted: int, needed: int):
        super().__init__(f"step {step} ran out of candidates with {accepted}/{needed} edges")
        self.step = step
        self.accepted = accepted
        self.needed = needed


class NoPerfectMatching(RainbowError):
    def __init__(self, witness: Any, step: int = 0):
        super().__init__(
            f"k-out graph has no perfect matching: {len(witness.left_indices)} left sets "
            f"see {len(witness.neighborhood)} vertices"
        )
        self.witness = witness
        self.step = step
