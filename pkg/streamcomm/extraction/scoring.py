from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, NamedTuple, Sequence, Set

from ..sampling import DegreeCounter, SampledSubgraph


@dataclass
class CommunityCandidate:
    """Candidate community with the running counters conductance needs.

    volume           sum of stream degrees D[v]           Vol(C)
    internal_edges   sampled edges inside the candidate   |E_s(C,C)|
    subgraph_degree  sum of sampled degrees deg_s(v)      Vol_s(C)
    """

    members: Set[int] = field(default_factory=set)
    volume: int = 0
    internal_edges: int = 0
    subgraph_degree: int = 0

    @property
    def cut(self) -> int:
        """Sampled edges leaving the candidate, cut(C, V_s \\ C)"""
        return self.subgraph_degree - 2 * self.internal_edges

    def extend(self, node: int, graph: SampledSubgraph, degrees: DegreeCounter) -> "CommunityCandidate":
        if node in self.members:
            raise ValueError(f"node {node} is already a member")
        if node not in graph:
            raise ValueError(f"node {node} is not in the sampled subgraph")
        neighbors = graph.adjacency[node]
        self.internal_edges += sum(1 for other in neighbors if other in self.members)
        self.members.add(node)
        self.volume += degrees[node]
        self.subgraph_degree += len(neighbors)
        return self


Scorer = Callable[[CommunityCandidate], float]


def approx_conductance(candidate: CommunityCandidate) -> float:
    """(Vol(C) - 2|E_s(C,C)|) / Vol(C); 1.0 for a zero-volume candidate"""
    if candidate.volume == 0:
        return 1.0
    return (candidate.volume - 2 * candidate.internal_edges) / candidate.volume


def local_conductance(candidate: CommunityCandidate) -> float:
    """cut(C, V_s \\ C) / Vol_s(C) from subgraph quantities only"""
    if candidate.subgraph_degree == 0:
        return 1.0
    return candidate.cut / candidate.subgraph_degree


SCORERS: Dict[str, Scorer] = {
    "approx": approx_conductance,
    "local": local_conductance,
}


class SweepResult(NamedTuple):
    community: frozenset
    score: float
    index: int


def sweep(
    order: Sequence[int],
    queries: Iterable[int],
    max_size: int,
    graph: SampledSubgraph,
    degrees: DegreeCounter,
    scorer: Scorer = approx_conductance,
) -> SweepResult:
    """Score the prefixes {first i nodes of order} ∪ T for i = 1..min(b, |order|).

    The lowest score wins; ties go to the smallest i. Counters are carried
    from one prefix to the next, so each node is paid for once.
    """
    if not order:
        raise ValueError("sweep needs a non-empty order")
    if max_size < 1:
        raise ValueError(f"size bound must be >= 1, got {max_size}")
    queries = sorted(set(queries))
    candidate = CommunityCandidate()
    for query in queries:
        candidate.extend(query, graph, degrees)
    best_score, best_index = None, 0
    limit = min(max_size, len(order))
    for i in range(1, limit + 1):
        node = order[i - 1]
        if node not in candidate.members:
            candidate.extend(node, graph, degrees)
        score = scorer(candidate)
        if best_score is None or score < best_score:
            best_score, best_index = score, i
    community = frozenset(order[:best_index]) | frozenset(queries)
    return SweepResult(community, best_score, best_index)
