import math
import logging
from typing import Dict, Iterable, Mapping, Optional, Tuple

from ..errors import DistanceTreeError

logger = logging.getLogger(__name__)

# Dummy root id; input node ids are non-negative
ROOT = -1

INFINITY = math.inf


class DistanceTree:
    """Parent-array tree over the sampled node set, rooted at a dummy node.

    Query nodes hang directly under the root, every other node under an
    adjacent sampled node. ``dist(v)`` is the chain length to the root minus
    one; depths are never cached, so a reparent is a single assignment and
    descendants pick the new distance up on their next walk.
    """

    def __init__(self, queries: Iterable[int], max_dist: Optional[int] = None):
        self.queries = frozenset(queries)
        if not self.queries:
            raise DistanceTreeError("query set must not be empty")
        if ROOT in self.queries:
            raise DistanceTreeError(f"node id {ROOT} is reserved for the dummy root")
        self.parent: Dict[int, int] = {q: ROOT for q in self.queries}
        # Walks longer than this mean the chain is broken
        self.max_dist = max_dist

    def __contains__(self, node: int) -> bool:
        return node in self.parent

    def __len__(self) -> int:
        return len(self.parent)

    def __iter__(self):
        return iter(self.parent)

    def dist(self, node: int) -> float:
        if node == ROOT:
            raise DistanceTreeError("distance of the dummy root is undefined")
        parent = self.parent.get(node)
        if parent is None:
            return INFINITY
        limit = self.max_dist if self.max_dist is not None else len(self.parent)
        hops = 0
        while parent != ROOT:
            hops += 1
            if hops > limit:
                raise DistanceTreeError(f"parent chain of {node} exceeds {limit} hops")
            parent = self.parent[parent]
        return hops

    def hypothetical_dist(self, u: int, v: int) -> Tuple[float, float]:
        """Distances of u and v if the edge (u, v) were added; the tree is not touched"""
        du = self.dist(u)
        dv = self.dist(v)
        return min(du, dv + 1), min(dv, du + 1)

    def attach(self, node: int, parent: int) -> None:
        if node in self.parent:
            raise DistanceTreeError(f"node {node} is already in the tree")
        if parent not in self.parent:
            raise DistanceTreeError(f"parent {parent} is not in the tree")
        self.parent[node] = parent

    def reparent(self, node: int, parent: int) -> None:
        if node not in self.parent or parent not in self.parent:
            raise DistanceTreeError(f"reparent({node}, {parent}) needs both nodes in the tree")
        gap = self.dist(node) - self.dist(parent)
        if gap < 2:
            raise DistanceTreeError(f"reparent({node}, {parent}) would not shorten the chain (gap {gap})")
        self.parent[node] = parent

    def remove_nodes(self, doomed: Iterable[int]) -> None:
        doomed = set(doomed)
        if doomed & self.queries:
            raise DistanceTreeError(f"cannot remove query nodes {sorted(doomed & self.queries)}")
        for node, parent in self.parent.items():
            if parent in doomed and node not in doomed:
                raise DistanceTreeError(f"removing {parent} would orphan retained node {node}")
        for node in doomed:
            self.parent.pop(node, None)

    def check_parent_edges(self, adjacency: Mapping[int, Iterable[int]]) -> None:
        """Every non-query node's parent link must be a sampled edge"""
        for node, parent in self.parent.items():
            if node in self.queries:
                if parent != ROOT:
                    raise DistanceTreeError(f"query node {node} is not attached to the root")
                continue
            if parent not in adjacency.get(node, ()):
                raise DistanceTreeError(f"parent link ({parent}, {node}) is not a sampled edge")

    def dump(self) -> str:
        """One ``node parent dist`` line per node, ascending node id"""
        return "".join(
            f"{node} {self.parent[node]} {self.dist(node)}\n" for node in sorted(self.parent)
        )
