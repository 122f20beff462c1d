import itertools
import random

import networkx as nx
import pytest

from streamcomm.sampling import DegreeCounter, SampledSubgraph


def complete_edges(nodes):
    return [(u, v) for u, v in itertools.combinations(sorted(nodes), 2)]


def two_cliques(size=10):
    """Two disjoint cliques A = 0..size-1 and B = size..2size-1 joined by one bridge (size-1, size)"""
    a = range(size)
    b = range(size, 2 * size)
    return complete_edges(a) + complete_edges(b) + [(size - 1, size)]


def fully_sampled(edges):
    """Subgraph and exact degrees of a fully observed edge list"""
    graph = SampledSubgraph()
    degrees = DegreeCounter()
    for u, v in edges:
        graph.add_edge(u, v)
        degrees.add(u, v)
    return graph, degrees


def random_graph_edges(n, p, seed):
    G = nx.gnp_random_graph(n, p, seed=seed)
    return sorted((min(u, v), max(u, v)) for u, v in G.edges())


def shuffled(edges, seed):
    edges = list(edges)
    random.Random(seed).shuffle(edges)
    return edges


def bfs_ordered(edges, queries):
    """Edges sorted by the BFS distance of their nearer endpoint from the queries"""
    G = nx.Graph(edges)
    G.add_nodes_from(queries)
    dist = nx.multi_source_dijkstra_path_length(G, set(queries))
    reachable = [(u, v) for u, v in edges if u in dist and v in dist]
    return sorted(reachable, key=lambda e: (min(dist[e[0]], dist[e[1]]), max(dist[e[0]], dist[e[1]]), e))


def write_edge_file(path, edges, header=True):
    with open(path, "w") as out:
        if header:
            out.write("# FromNodeId\tToNodeId\n")
        for u, v in edges:
            out.write(f"{u}\t{v}\n")
    return path


@pytest.fixture
def clique_stream(tmp_path):
    """An isolated 20-clique (nodes 100..119) plus an unrelated path, as an edge file"""
    clique = complete_edges(range(100, 120))
    noise = [(i, i + 1) for i in range(0, 30)]
    edges = shuffled(clique + noise, seed=7)
    return write_edge_file(tmp_path / "clique.txt", edges), frozenset(range(100, 120))
