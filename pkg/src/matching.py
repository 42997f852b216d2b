"""
Hopcroft-Karp maximum bipartite matching on integer-indexed sides, with
a deficiency witness when the left side cannot be saturated.
"""

from collections import deque
from typing import Deque, Dict, List, Optional, Sequence, Tuple

UNMATCHED = -1
INFINITY = float('inf')


class HopcroftKarp:
    """
    Maximum matching between left vertices 0..L-1 and integer right labels.

    The constructor takes, for each left index, the list of adjacent right
    labels in the order they should be tried. Augmentation is iterative, so
    long alternating paths do not hit the recursion limit.
    """

    def __init__(self, adjacency: Sequence[Sequence[int]]):
        self._adj: List[Tuple[int, ...]] = [tuple(nbrs) for nbrs in adjacency]
        self._pair_left: List[int] = [UNMATCHED] * len(self._adj)
        self._pair_right: Dict[int, int] = {}
        self._dist: List[float] = [INFINITY] * len(self._adj)
        self._limit: float = INFINITY
        self._size: Optional[int] = None

    def maximum_matching(self) -> Dict[int, int]:
        """
        Returns:
            Mapping left index -> matched right label
        """
        if self._size is None:
            self._size = self._run()
        return {u: r for u, r in enumerate(self._pair_left) if r != UNMATCHED}

    def size(self) -> int:
        if self._size is None:
            self._size = self._run()
        return self._size

    def _run(self) -> int:
        matched = 0
        while self._bfs():
            cursor = [0] * len(self._adj)
            for u in range(len(self._adj)):
                if self._pair_left[u] == UNMATCHED and self._augment(u, cursor):
                    matched += 1
        return matched

    def _bfs(self) -> bool:
        queue: Deque[int] = deque()
        for u, r in enumerate(self._pair_left):
            if r == UNMATCHED:
                self._dist[u] = 0
                queue.append(u)
            else:
                self._dist[u] = INFINITY
        self._limit = INFINITY
        while queue:
            u = queue.popleft()
            if self._dist[u] >= self._limit:
                continue
            for r in self._adj[u]:
                w = self._pair_right.get(r, UNMATCHED)
                if w == UNMATCHED:
                    if self._limit == INFINITY:
                        self._limit = self._dist[u] + 1
                elif self._dist[w] == INFINITY:
                    self._dist[w] = self._dist[u] + 1
                    queue.append(w)
        return self._limit != INFINITY

    def _augment(self, root: int, cursor: List[int]) -> bool:
        stack = [root]
        rights: List[int] = []
        while stack:
            u = stack[-1]
            advanced = False
            while cursor[u] < len(self._adj[u]):
                r = self._adj[u][cursor[u]]
                cursor[u] += 1
                w = self._pair_right.get(r, UNMATCHED)
                if w == UNMATCHED:
                    if self._dist[u] + 1 == self._limit:
                        rights.append(r)
                        for left, right in zip(stack, rights):
                            self._pair_left[left] = right
                            self._pair_right[right] = left
                        return True
                elif self._dist[w] == self._dist[u] + 1:
                    rights.append(r)
                    stack.append(w)
                    advanced = True
                    break
            if not advanced:
                self._dist[u] = INFINITY
                stack.pop()
                if rights:
                    rights.pop()
        return False

    def hall_witness(self) -> Optional[Tuple[List[int], List[int]]]:
        """
        Left set S with |N(S)| < |S|, from alternating reachability.

        Every left vertex reachable from an unmatched left vertex by an
        alternating path goes into S; N(S) is exactly the reachable right
        side, all of it matched back into S.

        Returns:
            (left indices, right labels) sorted, or None when the matching
            saturates the left side
        """
        self.maximum_matching()
        free = [u for u, r in enumerate(self._pair_left) if r == UNMATCHED]
        if not free:
            return None
        left_seen = set(free)
        right_seen = set()
        queue: Deque[int] = deque(free)
        while queue:
            u = queue.popleft()
            for r in self._adj[u]:
                if r in right_seen:
                    continue
                right_seen.add(r)
                w = self._pair_right[r]
                if w not in left_seen:
                    left_seen.add(w)
                    queue.append(w)
        return sorted(left_seen), sorted(right_seen)
