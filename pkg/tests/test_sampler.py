import random
import statistics
import time

import networkx as nx
import pytest

from streamcomm.errors import SamplerConfigError
from streamcomm.models import SamplerConfig
from streamcomm.oracle import bfs_dist
from streamcomm.sampling import (
    DegreeCounter,
    SampledSubgraph,
    StreamSampler,
    get_sampler,
    read_subgraph,
    sample_stream,
    write_subgraph,
)
from streamcomm.stream_io import EdgeStream, write_edges
from streamcomm.synthetic import random_stream

from conftest import bfs_ordered, random_graph_edges


def test_admission_stops_at_k_hops():
    graph, degrees = sample_stream([(0, 1), (1, 2), (2, 3)], {0}, SamplerConfig(hops=2))
    assert graph.nodes == {0, 1, 2}
    assert graph.edges() == [(0, 1), (1, 2)]
    assert degrees[3] == 1


def test_rejected_edges_still_count_degrees():
    sampler = get_sampler({0}, SamplerConfig(hops=1))
    sampler.process_edge((5, 6))
    assert sampler.graph.nodes == {0}
    assert sampler.degrees[5] == sampler.degrees[6] == 1


def test_admit_reports_new_nodes_and_reparents():
    sampler = StreamSampler({0, 9}, SamplerConfig(hops=3))
    assert sampler.admit(0, 1) == [1]
    assert sampler.admit(1, 2) == [2]
    assert sampler.tree.dist(2) == 2
    assert sampler.admit(9, 2) == []
    assert sampler.tree.dist(2) == 1
    assert sampler.tree.parent[2] == 9


def test_admit_decides_on_hypothetical_distances(monkeypatch):
    sampler = StreamSampler({0}, SamplerConfig(hops=2))
    calls = []
    original = sampler.tree.hypothetical_dist

    def spy(u, v):
        calls.append((u, v))
        return original(u, v)

    monkeypatch.setattr(sampler.tree, "hypothetical_dist", spy)
    assert sampler.admit(0, 1) == [1]
    assert sampler.admit(1, 2) == [2]
    assert sampler.admit(2, 3) == []
    assert calls == [(0, 1), (1, 2), (2, 3)]


def test_subgraph_add_edge_reports_duplicates():
    graph = SampledSubgraph()
    assert not graph.has_edge(1, 2)
    assert graph.add_edge(1, 2)
    assert graph.has_edge(1, 2) and graph.has_edge(2, 1)
    assert not graph.add_edge(2, 1)
    assert graph.num_edges == 1
    assert not graph.has_edge(1, 3)
    with pytest.raises(ValueError):
        graph.add_edge(4, 4)


def test_duplicate_edges_deduplicated_but_counted():
    graph, degrees = sample_stream([(0, 1), (1, 0), (0, 1)], {0})
    assert graph.num_edges == 1
    assert degrees[0] == 3


def test_prune_size_below_query_count_rejected():
    with pytest.raises(SamplerConfigError):
        StreamSampler({0, 1, 2}, SamplerConfig(prune_size=2))


def test_empty_query_set_rejected():
    with pytest.raises(SamplerConfigError):
        StreamSampler(set())


def test_prune_keeps_nearest_by_distance_then_id():
    star = [(0, leaf) for leaf in range(20, 0, -1)]
    config = SamplerConfig(hops=2, prune_cycle=20, prune_size=6)
    sampler = StreamSampler({0}, config)
    for edge in star:
        sampler.process_edge(edge)
    assert sampler.prunings == 1
    assert sampler.graph.nodes == {0, 1, 2, 3, 4, 5}
    assert set(sampler.tree) == sampler.graph.nodes
    assert sampler.graph.num_edges == 5


def test_prune_under_budget_is_a_no_op():
    sampler = StreamSampler({0}, SamplerConfig(prune_size=10))
    sampler.admit(0, 1)
    assert sampler.prune() == []
    assert sampler.prunings == 0


def test_bfs_ordered_stream_samples_the_k_hop_ball():
    edges = random_graph_edges(60, 0.08, seed=3)
    queries = {0, 1}
    graph, _ = sample_stream(bfs_ordered(edges, queries), queries, SamplerConfig(hops=2))
    dist = bfs_dist(nx.Graph(edges), queries)
    ball = {node for node, d in dist.items() if d <= 2} | queries
    assert graph.nodes == ball
    induced = sorted((u, v) for u, v in edges if u in ball and v in ball)
    assert graph.edges() == induced


def test_degree_counter_handshake():
    edges = random_graph_edges(40, 0.1, seed=1)
    _, degrees = sample_stream(edges, {0})
    assert degrees.total() == 2 * len(edges)
    G = nx.Graph(edges)
    assert all(degrees[node] == G.degree(node) for node in G)


def test_empty_stream():
    graph, degrees = sample_stream([], {4, 2})
    assert graph.nodes == {2, 4}
    assert graph.num_edges == 0
    assert len(degrees) == 0


def test_subgraph_symmetry_and_edge_count():
    edges = random_graph_edges(50, 0.1, seed=8)
    graph, _ = sample_stream(edges, {0, 1}, SamplerConfig(hops=3))
    for node, neighbors in graph.adjacency.items():
        assert node not in neighbors
        assert all(node in graph.adjacency[other] for other in neighbors)
    assert sum(graph.degree(node) for node in graph.nodes) == 2 * graph.num_edges


@pytest.mark.parametrize("seed", range(200))
def test_tree_distance_never_undercuts_bfs(seed):
    rng = random.Random(seed)
    stream = [tuple(edge) for edge in random_stream(30, 80, seed=seed).tolist()]
    queries = set(rng.sample(range(30), rng.randint(1, 3)))
    config = SamplerConfig(hops=rng.randint(1, 4), prune_cycle=7, prune_size=10, check_invariants=True)
    sampler = StreamSampler(queries, config)
    for i, edge in enumerate(stream, start=1):
        sampler.process_edge(edge)
        if i % 10 == 0 or i == len(stream):
            # parent edges are sampled edges, so the tree chain is a path in the subgraph
            truth = bfs_dist(sampler.graph, queries)
            for node in sampler.tree:
                d = sampler.tree.dist(node)
                assert d <= config.hops
                assert d >= truth[node]
                assert node in sampler.graph
            assert queries <= sampler.graph.nodes
            assert len(sampler.graph) <= config.prune_size + config.prune_cycle


def test_node_budget_on_random_stream(tmp_path):
    path = tmp_path / "stream.txt"
    write_edges(path, random_stream(5_000, 100_000, seed=4).tolist())
    config = SamplerConfig(prune_cycle=1_000, prune_size=200)
    sampler = StreamSampler({0, 1, 2}, config)
    for edge in EdgeStream(path):
        sampler.process_edge(edge)
        assert len(sampler.graph) <= config.prune_size + 2 * config.prune_cycle
    assert sampler.prunings > 0
    assert sampler.peak_nodes <= config.prune_size + config.prune_cycle
    assert sampler.edges_seen == 100_000


@pytest.mark.slow
def test_node_budget_on_million_edge_stream(tmp_path):
    path = tmp_path / "stream.txt"
    write_edges(path, random_stream(200_000, 1_000_000, seed=5).tolist())
    config = SamplerConfig(prune_cycle=100_000, prune_size=3_000)
    sampler = StreamSampler({0, 1, 2}, config)
    stream = EdgeStream(path)
    position = 0
    for edge in stream:
        assert stream.position > position
        position = stream.position
        sampler.process_edge(edge)
        assert len(sampler.graph) <= config.prune_size + 2 * config.prune_cycle
    assert sampler.edges_seen == 1_000_000
    with pytest.raises(RuntimeError):
        next(iter(stream))


def _sampling_time(edges, repeats=5):
    timings = []
    for _ in range(repeats):
        started = time.perf_counter()
        sample_stream(edges, {0, 1, 2}, SamplerConfig(prune_cycle=50_000, prune_size=3_000))
        timings.append(time.perf_counter() - started)
    return statistics.median(timings)


@pytest.mark.slow
def test_sampling_time_scales_linearly():
    edges = [tuple(e) for e in random_stream(100_000, 800_000, seed=6).tolist()]
    single = _sampling_time(edges[:400_000])
    double = _sampling_time(edges)
    assert double <= 2.5 * single


def test_subgraph_dump_round_trip(tmp_path):
    graph = SampledSubgraph({7})
    for u, v in [(1, 2), (2, 3), (1, 3)]:
        graph.add_edge(u, v)
    degrees = DegreeCounter({1: 4, 2: 2, 3: 2, 9: 1})
    path = tmp_path / "subgraph.txt"
    write_subgraph(path, graph, degrees)
    assert path.read_text().splitlines()[:2] == ["v 4", "1: 2 3"]
    loaded, loaded_degrees = read_subgraph(path)
    assert loaded.nodes == {1, 2, 3, 7}
    assert loaded.edges() == graph.edges()
    assert loaded_degrees == degrees


def test_read_subgraph_rejects_missing_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1: 2\n")
    with pytest.raises(ValueError):
        read_subgraph(path)
