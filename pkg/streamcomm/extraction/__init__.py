from .diffusion import LazyWalk, ProbabilityVector, diffuse, init_distribution, step
from .extractor import extract
from .scoring import (
    SCORERS,
    CommunityCandidate,
    SweepResult,
    approx_conductance,
    local_conductance,
    sweep,
)

__all__ = [
    "SCORERS",
    "CommunityCandidate",
    "LazyWalk",
    "ProbabilityVector",
    "SweepResult",
    "approx_conductance",
    "diffuse",
    "extract",
    "init_distribution",
    "local_conductance",
    "step",
    "sweep",
]
