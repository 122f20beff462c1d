"""Synthetic streams for fixtures: planted partitions and uniform random edge lists"""

import logging
from typing import List, Tuple

import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)


def planted_partition(
    communities: int,
    size: int,
    p_in: float,
    p_out: float,
    seed: int = 0,
    shuffle: bool = True,
) -> Tuple[List[Tuple[int, int]], List[frozenset]]:
    """Edges of a planted-partition graph (community i holds nodes i*size .. (i+1)*size-1).

    With ``shuffle`` the edge order is a seeded permutation, i.e. an arbitrary-order stream.
    """
    G = nx.planted_partition_graph(communities, size, p_in, p_out, seed=seed)
    edges = sorted((min(u, v), max(u, v)) for u, v in G.edges())
    if shuffle:
        rng = np.random.default_rng(seed)
        edges = [edges[i] for i in rng.permutation(len(edges))]
    groups = [frozenset(range(i * size, (i + 1) * size)) for i in range(communities)]
    logger.debug(f"Planted partition: {communities}x{size} nodes, {len(edges)} edges")
    return edges, groups


def random_stream(num_nodes: int, num_edges: int, seed: int = 0) -> np.ndarray:
    """``num_edges`` uniform random non-loop edges as an (m, 2) array; duplicates are possible"""
    rng = np.random.default_rng(seed)
    u = rng.integers(0, num_nodes, size=num_edges)
    offset = rng.integers(1, num_nodes, size=num_edges)
    v = (u + offset) % num_nodes
    return np.stack([u, v], axis=1)
