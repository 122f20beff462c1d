from typing import Iterable, Optional

from ..models import SamplerConfig
from .distance_tree import ROOT, DistanceTree
from .sampler import (
    DegreeCounter,
    SampledSubgraph,
    StreamSampler,
    read_subgraph,
    sample_stream,
    write_subgraph,
)


def get_sampler(
    queries: Iterable[int],
    config: Optional[SamplerConfig] = None,
    degrees: Optional[DegreeCounter] = None,
) -> StreamSampler:
    """Get a sampler for one query set"""
    return StreamSampler(queries, config or SamplerConfig(), degrees)


__all__ = [
    "ROOT",
    "DistanceTree",
    "DegreeCounter",
    "SampledSubgraph",
    "StreamSampler",
    "get_sampler",
    "read_subgraph",
    "sample_stream",
    "write_subgraph",
]
