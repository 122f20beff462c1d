import logging
from collections import Counter
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from ..errors import SamplerConfigError
from ..models import SamplerConfig
from ..stream_io import open_text
from .distance_tree import DistanceTree

logger = logging.getLogger(__name__)


class SampledSubgraph:
    """Undirected, deduplicated adjacency over the sampled node set.

    Neighbor sets give O(1) insertion; ``neighbors`` sorts on demand.
    """

    def __init__(self, nodes: Iterable[int] = ()):
        self.adjacency: Dict[int, Set[int]] = {node: set() for node in nodes}
        self.num_edges = 0

    def __contains__(self, node: int) -> bool:
        return node in self.adjacency

    def __len__(self) -> int:
        return len(self.adjacency)

    @property
    def nodes(self) -> Set[int]:
        return set(self.adjacency)

    def add_node(self, node: int) -> None:
        self.adjacency.setdefault(node, set())

    def add_edge(self, u: int, v: int) -> bool:
        """Add (u, v); returns False when the edge was already present"""
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) cannot be sampled")
        if self.has_edge(u, v):
            return False
        self.adjacency.setdefault(u, set()).add(v)
        self.adjacency.setdefault(v, set()).add(u)
        self.num_edges += 1
        return True

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency.get(u, ())

    def degree(self, node: int) -> int:
        return len(self.adjacency.get(node, ()))

    def neighbors(self, node: int) -> List[int]:
        return sorted(self.adjacency.get(node, ()))

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((u, v) for u, nbrs in self.adjacency.items() for v in nbrs if u < v)

    def remove_nodes(self, doomed: Iterable[int]) -> None:
        """Drop nodes and every edge touching them (keeps the induced subgraph)"""
        for node in doomed:
            neighbors = self.adjacency.pop(node, None)
            if neighbors is None:
                continue
            for other in neighbors:
                if other in self.adjacency:
                    self.adjacency[other].discard(node)
                    self.num_edges -= 1


class DegreeCounter:
    """Stream-occurrence count per node, for every node ever seen"""

    def __init__(self, counts: Optional[Dict[int, int]] = None):
        self.counts: Counter = Counter(counts or {})

    def add(self, u: int, v: int) -> None:
        self.counts[u] += 1
        self.counts[v] += 1

    def __getitem__(self, node: int) -> int:
        return self.counts.get(node, 0)

    def __len__(self) -> int:
        return len(self.counts)

    def __eq__(self, other) -> bool:
        return isinstance(other, DegreeCounter) and self.counts == other.counts

    def total(self) -> int:
        return sum(self.counts.values())

    def restrict(self, nodes: Iterable[int]) -> "DegreeCounter":
        """Read-only view over a node subset, small enough to ship to a worker"""
        return DegreeCounter({node: self.counts.get(node, 0) for node in nodes})


class StreamSampler:
    """Single-pass admission of stream edges into the k-hop neighborhood of the queries.

    Degrees are counted here unless a shared counter is passed in, in which
    case whoever feeds the stream keeps it up to date.
    """

    def __init__(
        self,
        queries: Iterable[int],
        config: SamplerConfig = SamplerConfig(),
        degrees: Optional[DegreeCounter] = None,
    ):
        queries = frozenset(queries)
        if not queries:
            raise SamplerConfigError("query set must not be empty")
        if config.prune_size < len(queries):
            raise SamplerConfigError(
                f"prune_size={config.prune_size} is smaller than the query set ({len(queries)} nodes)"
            )
        self.queries = queries
        self.config = config
        self.tree = DistanceTree(queries, max_dist=config.hops)
        self.graph = SampledSubgraph(queries)
        self.owns_degrees = degrees is None
        self.degrees = DegreeCounter() if degrees is None else degrees
        self.edges_seen = 0
        self.prunings = 0
        self.peak_nodes = len(self.graph)

    def process_edge(self, edge: Tuple[int, int]) -> None:
        u, v = edge
        if self.owns_degrees:
            self.degrees.add(u, v)
        self.edges_seen += 1
        self.admit(u, v)
        if self.edges_seen % self.config.prune_cycle == 0:
            self.prune()

    def admit(self, u: int, v: int) -> List[int]:
        """Admission test for one edge; returns the nodes newly added to the subgraph"""
        tree = self.tree
        new_u, new_v = tree.hypothetical_dist(u, v)
        hops = self.config.hops
        if new_u > hops or new_v > hops:
            return []
        added = []
        if u not in tree:
            tree.attach(u, v)
            added.append(u)
        elif v not in tree:
            tree.attach(v, u)
            added.append(v)
        elif new_u < tree.dist(u):
            tree.reparent(u, v)
        elif new_v < tree.dist(v):
            tree.reparent(v, u)
        self.graph.add_edge(u, v)
        if added and len(self.graph) > self.peak_nodes:
            self.peak_nodes = len(self.graph)
        if self.config.check_invariants:
            tree.check_parent_edges(self.graph.adjacency)
        return added

    def prune(self) -> List[int]:
        """Cut the subgraph to the prune_size nodes nearest the queries; returns the dropped nodes"""
        if len(self.graph) <= self.config.prune_size:
            return []
        ranked = sorted(self.graph.adjacency, key=lambda node: (self.tree.dist(node), node))
        doomed = ranked[self.config.prune_size:]
        self.graph.remove_nodes(doomed)
        self.tree.remove_nodes(doomed)
        self.prunings += 1
        logger.debug(f"Pruned {len(doomed)} nodes after {self.edges_seen} edges, {len(self.graph)} kept")
        if self.config.check_invariants:
            self.tree.check_parent_edges(self.graph.adjacency)
        return doomed

    def result(self) -> Tuple[SampledSubgraph, DegreeCounter]:
        return self.graph, self.degrees


def sample_stream(
    stream: Iterable[Tuple[int, int]],
    queries: Iterable[int],
    config: SamplerConfig = SamplerConfig(),
) -> Tuple[SampledSubgraph, DegreeCounter]:
    """Run the sampler over a whole stream in one pass"""
    sampler = StreamSampler(queries, config)
    for edge in stream:
        sampler.process_edge(edge)
    logger.info(
        f"Sampled {len(sampler.graph)} nodes / {sampler.graph.num_edges} edges "
        f"from {sampler.edges_seen} stream edges ({sampler.prunings} prunings)"
    )
    return sampler.result()


def write_subgraph(path: Union[str, Path], graph: SampledSubgraph, degrees: DegreeCounter) -> None:
    """Dump ``v <count>``, one ``u: n1 n2 ...`` line per node, then ``d u <count>`` lines"""
    with open_text(path, "wt") as out:
        out.write(f"v {len(graph)}\n")
        for node in sorted(graph.adjacency):
            neighbors = " ".join(str(n) for n in graph.neighbors(node))
            out.write(f"{node}: {neighbors}\n" if neighbors else f"{node}:\n")
        for node in sorted(degrees.counts):
            out.write(f"d {node} {degrees.counts[node]}\n")


def read_subgraph(path: Union[str, Path]) -> Tuple[SampledSubgraph, DegreeCounter]:
    graph = SampledSubgraph()
    counts = {}
    with open_text(path) as handle:
        header = handle.readline().split()
        if len(header) != 2 or header[0] != "v":
            raise ValueError(f"{path}: missing 'v <count>' header")
        expected = int(header[1])
        for line in handle:
            if line.startswith("d "):
                _, node, count = line.split()
                counts[int(node)] = int(count)
                continue
            head, _, tail = line.partition(":")
            if not head.strip():
                continue
            node = int(head)
            graph.add_node(node)
            for other in tail.split():
                graph.add_edge(node, int(other))
    if len(graph) != expected:
        raise ValueError(f"{path}: header announces {expected} nodes, found {len(graph)}")
    return graph, DegreeCounter(counts)
