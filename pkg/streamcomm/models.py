from typing import Annotated, Any, Dict, List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, model_validator

from .config import (
    DEFAULT_HOPS,
    DEFAULT_MAX_SIZE,
    DEFAULT_PRUNE_CYCLE,
    DEFAULT_PRUNE_SIZE,
    DEFAULT_SEED,
)

# Node sets are serialized as ascending lists so JSON output is reproducible
NodeSet = Annotated[frozenset[int], PlainSerializer(lambda s: sorted(s), return_type=List[int])]

Mode = Literal["approx", "local", "truth-size"]


class SamplerConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    hops: int = Field(DEFAULT_HOPS, ge=1)
    prune_cycle: int = Field(DEFAULT_PRUNE_CYCLE, ge=1)
    prune_size: int = Field(DEFAULT_PRUNE_SIZE, ge=1)
    seed: int = DEFAULT_SEED
    check_invariants: bool = False


class ExtractionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    hops: int = Field(DEFAULT_HOPS, ge=0)
    max_size: int = Field(DEFAULT_MAX_SIZE, ge=1)
    mode: Mode = "approx"
    truth_size: Optional[int] = Field(None, ge=1)

    # truth_size may stay unset in truth-size mode when every case supplies its own
    @model_validator(mode="after")
    def _truth_size_only_for_truth_mode(self) -> "ExtractionConfig":
        if self.truth_size is not None and self.mode != "truth-size":
            raise ValueError(f"truth_size is only meaningful with mode 'truth-size', not {self.mode!r}")
        return self


class CommunityTable(BaseModel):
    communities: List[NodeSet]
    source: str

    def __len__(self) -> int:
        return len(self.communities)


class TestCase(BaseModel):
    __test__ = False  # not a pytest class

    community_index: int
    truth: NodeSet
    queries: NodeSet


class DetectionResult(BaseModel):
    community: NodeSet
    score: float
    candidate_index: int
    mode: Mode
    mass: Dict[int, float] = Field(default_factory=dict)
    warning: Optional[str] = None

    @property
    def size(self) -> int:
        return len(self.community)


class CaseRecord(BaseModel):
    case_id: int
    community_index: int
    f1: float = Field(ge=0.0, le=1.0)
    precision: float
    recall: float
    detected: NodeSet
    size: int
    truth_size: int
    truth_density: Optional[float] = None
    coverage: float
    score: float
    mode: Mode
    candidate_index: int
    sampling_failed: bool = False
    error: Optional[str] = None
    times: Optional[Dict[str, float]] = None


class BucketStats(BaseModel):
    n: int
    mean_f1: float


class BatchSummary(BaseModel):
    repetition: int = 0
    seed: int = DEFAULT_SEED
    n: int
    failed: int = 0
    mean_f1: Optional[float] = None
    stderr_f1: Optional[float] = None
    by_size: Dict[str, BucketStats] = Field(default_factory=dict)
    by_density: Dict[str, BucketStats] = Field(default_factory=dict)
    community_sizes: Dict[str, float] = Field(default_factory=dict)
    config: Dict[str, Any] = Field(default_factory=dict)
