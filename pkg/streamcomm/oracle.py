"""Brute-force references for tests.

Everything here recomputes from scratch on a fully loaded graph; none of it
respects the streaming constraints.
"""

from typing import Dict, Iterable, Mapping, Sequence, Union

import networkx as nx
import numpy as np

from .extraction.scoring import CommunityCandidate, Scorer, SweepResult, approx_conductance
from .sampling import DegreeCounter, SampledSubgraph

DENSE_LIMIT = 500

GraphLike = Union[nx.Graph, SampledSubgraph, Mapping[int, Iterable[int]]]


def to_networkx(graph: GraphLike) -> nx.Graph:
    if isinstance(graph, nx.Graph):
        return graph
    adjacency = graph.adjacency if isinstance(graph, SampledSubgraph) else graph
    G = nx.Graph()
    for node, neighbors in adjacency.items():
        G.add_node(node)
        G.add_edges_from((node, other) for other in neighbors)
    return G


def bfs_dist(graph: GraphLike, queries: Iterable[int]) -> Dict[int, int]:
    """Exact hop distance to the nearest query node, for every reachable node"""
    G = to_networkx(graph).copy()
    queries = set(queries)
    G.add_nodes_from(queries)
    return dict(nx.multi_source_dijkstra_path_length(G, queries))


def conductance_from_counts(cut: int, volume: int, complement_volume: int) -> float:
    """cut / min(Vol(C), Vol(V \\ C))"""
    denominator = min(volume, complement_volume)
    if denominator == 0:
        raise ValueError("conductance is undefined when either side has zero volume")
    return cut / denominator


def exact_conductance(community: Iterable[int], graph: GraphLike) -> float:
    G = to_networkx(graph)
    community = set(community)
    if not community:
        raise ValueError("community must not be empty")
    if community >= set(G.nodes):
        raise ValueError("community must not cover the whole graph")
    rest = set(G.nodes) - community
    return conductance_from_counts(nx.cut_size(G, community, rest), nx.volume(G, community), nx.volume(G, rest))


def dense_diffuse(graph: GraphLike, queries: Iterable[int], k: int, orientation: str = "conserving") -> Dict[int, float]:
    """k lazy-walk steps with an explicit dense transition matrix"""
    G = to_networkx(graph)
    nodes = sorted(G.nodes)
    n = len(nodes)
    if n > DENSE_LIMIT:
        raise ValueError(f"dense reference limited to {DENSE_LIMIT} nodes, got {n}")
    A = nx.to_numpy_array(G, nodelist=nodes)
    degree = A.sum(axis=1)
    transition = np.zeros((n, n))
    for j in range(n):
        for i in range(n):
            if degree[j] == 0 or degree[i] == 0:
                transition[i, j] = 1.0 if i == j else 0.0
            elif orientation == "conserving":
                # column j spreads node j's mass
                transition[i, j] = (0.5 if i == j else 0.0) + 0.5 * A[i, j] / degree[j]
            else:
                transition[i, j] = (0.5 if i == j else 0.0) + 0.5 * A[i, j] / degree[i]
    queries = set(queries)
    p = np.array([1.0 / len(queries) if node in queries else 0.0 for node in nodes])
    for _ in range(k):
        p = transition @ p
    return {node: float(mass) for node, mass in zip(nodes, p)}


def recount(members: Iterable[int], graph: SampledSubgraph, degrees: DegreeCounter) -> CommunityCandidate:
    """Candidate counters recomputed from scratch"""
    members = set(members)
    internal = sum(1 for u, v in graph.edges() if u in members and v in members)
    return CommunityCandidate(
        members=members,
        volume=sum(degrees[node] for node in members),
        internal_edges=internal,
        subgraph_degree=sum(graph.degree(node) for node in members),
    )


def exhaustive_sweep(
    order: Sequence[int],
    queries: Iterable[int],
    max_size: int,
    graph: SampledSubgraph,
    degrees: DegreeCounter,
    scorer: Scorer = approx_conductance,
) -> SweepResult:
    queries = frozenset(queries)
    best = None
    for i in range(1, min(max_size, len(order)) + 1):
        members = frozenset(order[:i]) | queries
        score = scorer(recount(members, graph, degrees))
        if best is None or score < best.score:
            best = SweepResult(members, score, i)
    return best
