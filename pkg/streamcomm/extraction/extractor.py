import logging
from typing import Iterable

from ..errors import QueryNotSampledError
from ..models import DetectionResult, ExtractionConfig
from ..sampling import DegreeCounter, SampledSubgraph
from .diffusion import diffuse
from .scoring import SCORERS, CommunityCandidate, approx_conductance, sweep

logger = logging.getLogger(__name__)


def extract(
    graph: SampledSubgraph,
    degrees: DegreeCounter,
    queries: Iterable[int],
    config: ExtractionConfig = ExtractionConfig(),
) -> DetectionResult:
    """Diffuse from the queries, rank by mass and cut the ranking into a community"""
    queries = frozenset(queries)
    missing = queries - graph.adjacency.keys()
    if missing:
        raise QueryNotSampledError(missing)

    p = diffuse(graph, queries, config.hops)
    order = p.ranked()

    if config.mode == "truth-size":
        if config.truth_size is None:
            raise ValueError("mode 'truth-size' requires truth_size")
        if config.truth_size < len(queries):
            raise ValueError(f"truth_size={config.truth_size} is smaller than the query set ({len(queries)})")
        index = min(config.truth_size, len(order))
        community = frozenset(order[:index]) | queries
        candidate = CommunityCandidate()
        for node in sorted(community):
            candidate.extend(node, graph, degrees)
        score = approx_conductance(candidate)
    else:
        community, score, index = sweep(order, queries, config.max_size, graph, degrees, SCORERS[config.mode])

    warning = None
    unseen = sorted(q for q in queries if degrees[q] == 0)
    if unseen:
        warning = f"query nodes never observed in the stream: {unseen}"
        logger.warning(warning)

    logger.debug(f"Extracted {len(community)} nodes (mode={config.mode}, index={index}, score={score:.4f})")
    return DetectionResult(
        community=community,
        score=score,
        candidate_index=index,
        mode=config.mode,
        mass={node: p[node] for node in sorted(community)},
        warning=warning,
    )
