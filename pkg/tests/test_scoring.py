import pytest

from streamcomm.extraction import (
    CommunityCandidate,
    approx_conductance,
    diffuse,
    local_conductance,
    sweep,
)
from streamcomm.oracle import exhaustive_sweep, recount
from streamcomm.sampling import DegreeCounter

from conftest import fully_sampled, random_graph_edges, two_cliques


def test_approximate_conductance_from_counters():
    candidate = CommunityCandidate(members={0}, volume=40, internal_edges=15, subgraph_degree=33)
    assert approx_conductance(candidate) == 0.25


def test_local_conductance_from_counters():
    candidate = CommunityCandidate(members={0}, volume=40, internal_edges=15, subgraph_degree=33)
    assert candidate.cut == 3
    assert local_conductance(candidate) == pytest.approx(3 / 33, abs=1e-12)


def test_zero_volume_scores_worst():
    assert approx_conductance(CommunityCandidate()) == 1.0
    assert local_conductance(CommunityCandidate()) == 1.0


def test_extend_keeps_counters_in_step():
    graph, _ = fully_sampled([(1, 2), (2, 3), (1, 3), (3, 4)])
    degrees = DegreeCounter({1: 3, 2: 2, 3: 3, 4: 1})
    candidate = CommunityCandidate()
    for node in (1, 2, 3):
        candidate.extend(node, graph, degrees)
    assert (candidate.volume, candidate.internal_edges, candidate.subgraph_degree) == (8, 3, 7)
    assert candidate.cut == 1
    assert candidate == recount({1, 2, 3}, graph, degrees)


def test_extend_rejects_duplicates_and_unsampled_nodes():
    graph, degrees = fully_sampled([(1, 2)])
    candidate = CommunityCandidate().extend(1, graph, degrees)
    with pytest.raises(ValueError):
        candidate.extend(1, graph, degrees)
    with pytest.raises(ValueError):
        candidate.extend(9, graph, degrees)


def test_sweep_finds_the_seeded_clique():
    graph, degrees = fully_sampled(two_cliques(10))
    order = list(range(20))
    community, score, index = sweep(order, {0, 1}, 15, graph, degrees)
    assert community == frozenset(range(10))
    assert index == 10
    assert score == pytest.approx(1 / 91)


def test_sweep_single_candidate():
    graph, degrees = fully_sampled(two_cliques(10))
    result = sweep([3, 0, 1], {0}, 1, graph, degrees)
    assert result.index == 1
    assert result.community == frozenset({0, 3})


def test_sweep_clamps_to_order_length():
    graph, degrees = fully_sampled([(0, 1), (1, 2)])
    assert sweep([0, 1], {0}, 50, graph, degrees).index in (1, 2)


def test_sweep_rejects_bad_arguments():
    graph, degrees = fully_sampled([(0, 1)])
    with pytest.raises(ValueError):
        sweep([], {0}, 5, graph, degrees)
    with pytest.raises(ValueError):
        sweep([0, 1], {0}, 0, graph, degrees)


def test_sweep_ties_go_to_the_smaller_prefix():
    # {0, 1} and the whole graph both score 0
    graph, _ = fully_sampled([(0, 1), (2, 3)])
    degrees = DegreeCounter({0: 1, 1: 1, 2: 1, 3: 1})
    result = sweep([0, 1, 2, 3], {0}, 4, graph, degrees)
    assert result.index == 2
    assert result.score == 0.0


@pytest.mark.parametrize("seed", range(100))
@pytest.mark.parametrize("scorer", [approx_conductance, local_conductance])
def test_incremental_sweep_matches_exhaustive(seed, scorer):
    edges = random_graph_edges(30 + seed % 20, 0.12, seed=seed)
    graph, degrees = fully_sampled(edges)
    if 0 not in graph:
        graph.add_node(0)
    queries = {0}
    order = diffuse(graph, queries, 4).ranked()
    fast = sweep(order, queries, 25, graph, degrees, scorer)
    slow = exhaustive_sweep(order, queries, 25, graph, degrees, scorer)
    assert fast == slow


@pytest.mark.parametrize("seed", range(20))
def test_counter_ordering_invariant(seed):
    graph, degrees = fully_sampled(random_graph_edges(30, 0.15, seed=seed))
    candidate = CommunityCandidate()
    for node in sorted(graph.nodes)[:12]:
        candidate.extend(node, graph, degrees)
        assert candidate.volume >= candidate.subgraph_degree >= 2 * candidate.internal_edges >= 0
