import logging
from typing import Dict, Iterable, List, Literal, Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import QueryNotSampledError
from ..sampling import SampledSubgraph

logger = logging.getLogger(__name__)

Orientation = Literal["conserving", "literal"]


class ProbabilityVector:
    """Diffusion mass over the sampled node set.

    Node ids stay Python ints (any size); position i of ``mass`` belongs to ``nodes[i]``.
    """

    def __init__(self, nodes: Sequence[int], mass: np.ndarray):
        self.nodes = [int(node) for node in nodes]
        self.mass = mass
        self.index = {node: i for i, node in enumerate(self.nodes)}

    def __getitem__(self, node: int) -> float:
        return float(self.mass[self.index[node]])

    def __len__(self) -> int:
        return len(self.nodes)

    def total(self) -> float:
        return float(self.mass.sum())

    def as_dict(self) -> Dict[int, float]:
        return {node: float(p) for node, p in zip(self.nodes, self.mass)}

    def ranked(self) -> List[int]:
        """Nodes by mass descending, ties by node id ascending"""
        mass, nodes = self.mass, self.nodes
        return [nodes[i] for i in sorted(range(len(nodes)), key=lambda i: (-mass[i], nodes[i]))]

    def copy_with(self, mass: np.ndarray) -> "ProbabilityVector":
        clone = ProbabilityVector.__new__(ProbabilityVector)
        clone.nodes, clone.mass, clone.index = self.nodes, mass, self.index
        return clone


class LazyWalk:
    """Lazy random-walk operator over a sampled subgraph, kept sparse.

    In the conserving orientation each node keeps half its mass and spreads
    the other half evenly over its neighbors. The literal orientation applies
    the row-stochastic (I + D^-1 A)/2 to the column vector and does not
    conserve mass. Isolated nodes keep their mass in both.
    """

    def __init__(self, graph: SampledSubgraph, orientation: Orientation = "conserving"):
        self.nodes = sorted(graph.adjacency)
        index = {node: i for i, node in enumerate(self.nodes)}
        rows, cols = [], []
        for node, neighbors in graph.adjacency.items():
            i = index[node]
            for other in neighbors:
                rows.append(i)
                cols.append(index[other])
        n = len(self.nodes)
        self.adjacency = sp.csr_matrix(
            (np.ones(len(rows)), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(n, n),
        )
        self.degree = np.asarray(self.adjacency.sum(axis=1)).ravel()
        self.isolated = self.degree == 0
        self.inverse_degree = np.divide(
            1.0, self.degree, out=np.zeros_like(self.degree), where=~self.isolated
        )
        self.orientation = orientation

    def apply(self, mass: np.ndarray) -> np.ndarray:
        if self.orientation == "conserving":
            moved = self.adjacency @ (mass * self.inverse_degree)
        else:
            moved = self.inverse_degree * (self.adjacency @ mass)
        return np.where(self.isolated, mass, 0.5 * mass + 0.5 * moved)


def init_distribution(queries: Iterable[int], graph: SampledSubgraph) -> ProbabilityVector:
    queries = frozenset(queries)
    missing = queries - graph.adjacency.keys()
    if missing:
        raise QueryNotSampledError(missing)
    nodes = sorted(graph.adjacency)
    mass = np.array([1.0 if node in queries else 0.0 for node in nodes]) / len(queries)
    return ProbabilityVector(nodes, mass)


def step(graph: SampledSubgraph, p: ProbabilityVector, orientation: Orientation = "conserving") -> ProbabilityVector:
    return p.copy_with(LazyWalk(graph, orientation).apply(p.mass))


def diffuse(
    graph: SampledSubgraph,
    queries: Iterable[int],
    k: int,
    orientation: Orientation = "conserving",
) -> ProbabilityVector:
    """k lazy-walk steps from the uniform distribution over the queries"""
    if k < 0:
        raise ValueError(f"step count must be >= 0, got {k}")
    p = init_distribution(queries, graph)
    walk = LazyWalk(graph, orientation)
    mass = p.mass
    for _ in range(k):
        mass = walk.apply(mass)
    logger.debug(f"Diffused {k} steps over {len(p)} nodes, total mass {mass.sum():.12f}")
    return p.copy_with(mass)
