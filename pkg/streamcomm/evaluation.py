"""Batch experiment harness.

One pass over the stream drives a sampler per test case; the degree counter
is query-independent and kept once by the broadcaster. Extraction then runs
per case, inline or on a process pool, and records come back in case order.
"""

import asyncio
import math
import time
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .errors import StreamcommError
from .extraction import extract
from .models import (
    BatchSummary,
    BucketStats,
    CaseRecord,
    DetectionResult,
    ExtractionConfig,
    SamplerConfig,
    TestCase,
)
from .sampling import DegreeCounter, SampledSubgraph, StreamSampler
from .stream_io import EdgeStream, size_bucket

logger = logging.getLogger(__name__)

Stream = Union[str, Path, Iterable[Tuple[int, int]]]

PROGRESS_EVERY = 100_000


def f1(detected: Iterable[int], truth: Iterable[int]) -> Tuple[float, float, float]:
    """(F1, precision, recall) of a detected node set against the ground truth"""
    detected, truth = set(detected), set(truth)
    if not detected or not truth:
        raise ValueError("F1 needs non-empty detected and truth sets")
    overlap = len(detected & truth)
    precision = overlap / len(detected)
    recall = overlap / len(truth)
    if precision + recall == 0:
        return 0.0, precision, recall
    return 2 * precision * recall / (precision + recall), precision, recall


def _open_stream(stream: Stream) -> Iterable[Tuple[int, int]]:
    if isinstance(stream, (str, Path)):
        return EdgeStream(stream)
    return stream


class Detection(NamedTuple):
    result: DetectionResult
    graph: SampledSubgraph
    degrees: DegreeCounter
    times: Dict[str, float]


def run_detection(
    stream: Stream,
    queries: Iterable[int],
    sampler_config: SamplerConfig = SamplerConfig(),
    extraction_config: ExtractionConfig = ExtractionConfig(),
) -> Detection:
    """Sample one query set from the stream, then extract its community"""
    sampler = StreamSampler(queries, sampler_config)
    started = time.perf_counter()
    for edge in _open_stream(stream):
        sampler.process_edge(edge)
    sampled = time.perf_counter()
    logger.info(
        f"Sampled {len(sampler.graph)} nodes / {sampler.graph.num_edges} edges "
        f"from {sampler.edges_seen} stream edges"
    )
    result = extract(sampler.graph, sampler.degrees, sampler.queries, extraction_config)
    finished = time.perf_counter()
    times = {"sample": sampled - started, "extract": finished - sampled, "total": finished - started}
    return Detection(result, sampler.graph, sampler.degrees, times)


class StreamBroadcaster:
    """Feeds one edge stream to many samplers in a single pass.

    An edge only reaches the samplers that hold one of its endpoints (any
    other sampler would reject it); pruning follows the global edge index.
    """

    def __init__(self, cases: Sequence[TestCase], config: SamplerConfig):
        self.config = config
        self.degrees = DegreeCounter()
        self.samplers = [StreamSampler(case.queries, config, self.degrees) for case in cases]
        self.holders: Dict[int, Set[int]] = defaultdict(set)
        for j, sampler in enumerate(self.samplers):
            for node in sampler.queries:
                self.holders[node].add(j)
        self.truth_members: Dict[int, Set[int]] = defaultdict(set)
        for j, case in enumerate(cases):
            for node in case.truth:
                self.truth_members[node].add(j)
        self.truth_edges = [0] * len(cases)
        self.edges_seen = 0

    def feed(self, stream: Iterable[Tuple[int, int]]) -> None:
        holders, truth_members = self.holders, self.truth_members
        prune_cycle = self.config.prune_cycle
        for u, v in stream:
            self.degrees.add(u, v)
            self.edges_seen += 1
            at_u, at_v = holders.get(u), holders.get(v)
            if at_u or at_v:
                for j in sorted((at_u or set()) | (at_v or set())):
                    for node in self.samplers[j].admit(u, v):
                        holders[node].add(j)
            in_u = truth_members.get(u)
            if in_u:
                in_v = truth_members.get(v)
                if in_v:
                    for j in in_u & in_v:
                        self.truth_edges[j] += 1
            if self.edges_seen % prune_cycle == 0:
                self._prune_all()
            if self.edges_seen % PROGRESS_EVERY == 0:
                logger.debug(f"Broadcast {self.edges_seen} edges to {len(self.samplers)} samplers")
        for sampler in self.samplers:
            sampler.edges_seen = self.edges_seen

    def _prune_all(self) -> None:
        for j, sampler in enumerate(self.samplers):
            for node in sampler.prune():
                held = self.holders.get(node)
                if held is not None:
                    held.discard(j)
                    if not held:
                        del self.holders[node]


def _extract_case(
    graph: SampledSubgraph,
    degrees: DegreeCounter,
    queries: frozenset,
    config: ExtractionConfig,
) -> Tuple[Optional[DetectionResult], Optional[str], float]:
    started = time.perf_counter()
    try:
        result, error = extract(graph, degrees, queries, config), None
    except StreamcommError as e:
        result, error = None, str(e)
    return result, error, time.perf_counter() - started


async def _extract_parallel(jobs: List[tuple], parallel: int) -> List[tuple]:
    loop = asyncio.get_running_loop()
    with ProcessPoolExecutor(max_workers=parallel) as pool:
        futures = [loop.run_in_executor(pool, _extract_case, *job) for job in jobs]
        return await asyncio.gather(*futures)


def _case_config(case: TestCase, config: ExtractionConfig) -> ExtractionConfig:
    # The ground-truth-size baseline cuts each case at its own community size
    if config.mode == "truth-size" and config.truth_size is None:
        return config.model_copy(update={"truth_size": len(case.truth)})
    return config


def _density(size: int, internal_edges: int) -> Optional[float]:
    if size < 2:
        return None
    return 2 * internal_edges / (size * (size - 1))


class BatchResult(NamedTuple):
    records: List[CaseRecord]
    summary: BatchSummary


def run_batch(
    stream: Stream,
    cases: Sequence[TestCase],
    sampler_config: SamplerConfig = SamplerConfig(),
    extraction_config: ExtractionConfig = ExtractionConfig(),
    parallel: int = 1,
    with_times: bool = True,
) -> BatchResult:
    """Detect every test case from one pass over the stream and score it"""
    cases = list(cases)
    broadcaster = StreamBroadcaster(cases, sampler_config)
    started = time.perf_counter()
    broadcaster.feed(_open_stream(stream))
    sample_share = (time.perf_counter() - started) / len(cases) if cases else 0.0
    logger.info(f"Stream pass done: {broadcaster.edges_seen} edges, {len(cases)} cases")

    jobs = []
    for case, sampler in zip(cases, broadcaster.samplers):
        view = broadcaster.degrees.restrict(sampler.graph.adjacency)
        jobs.append((sampler.graph, view, sampler.queries, _case_config(case, extraction_config)))
    if parallel > 1 and len(jobs) > 1:
        outcomes = asyncio.run(_extract_parallel(jobs, parallel))
    else:
        outcomes = [_extract_case(*job) for job in jobs]

    records = []
    for case_id, (case, sampler, (result, error, seconds)) in enumerate(zip(cases, broadcaster.samplers, outcomes)):
        graph = sampler.graph
        sampling_failed = all(graph.degree(q) == 0 for q in case.queries)
        if error is not None:
            logger.warning(f"Case {case_id} (community {case.community_index}) failed: {error}")
            detected, score, index = case.queries, 1.0, 0
        else:
            detected, score, index = result.community, result.score, result.candidate_index
        f1_score, precision, recall = f1(detected, case.truth)
        times = None
        if with_times:
            times = {"sample": sample_share, "extract": seconds, "total": sample_share + seconds}
        records.append(CaseRecord(
            case_id=case_id,
            community_index=case.community_index,
            f1=f1_score,
            precision=precision,
            recall=recall,
            detected=detected,
            size=len(detected),
            truth_size=len(case.truth),
            truth_density=_density(len(case.truth), broadcaster.truth_edges[case_id]),
            coverage=sum(1 for node in case.truth if node in graph) / len(case.truth),
            score=score,
            mode=extraction_config.mode,
            candidate_index=index,
            sampling_failed=sampling_failed,
            error=error,
            times=times,
        ))

    summary = summarize(records, sampler_config, extraction_config)
    if summary.n:
        logger.info(f"Mean F1 {summary.mean_f1:.4f} ± {summary.stderr_f1:.4f} over {summary.n} cases")
    return BatchResult(records, summary)


def aggregate(scores: Sequence[float]) -> Tuple[Optional[float], Optional[float]]:
    """Mean and standard error (sample std / sqrt(n)); (None, None) when empty"""
    if len(scores) == 0:
        return None, None
    values = np.asarray(scores, dtype=float)
    if len(values) == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(len(values)))


def density_bucket(density: float) -> str:
    low = min(int(density * 10), 9) / 10
    return f"[{low:.1f},{low + 0.1:.1f})"


def _buckets(records: Iterable[CaseRecord], key) -> Dict[str, BucketStats]:
    grouped: Dict[str, List[float]] = defaultdict(list)
    for record in records:
        label = key(record)
        if label is not None:
            grouped[label].append(record.f1)
    return {
        label: BucketStats(n=len(values), mean_f1=float(np.mean(values)))
        for label, values in sorted(grouped.items())
    }


def summarize(
    records: Sequence[CaseRecord],
    sampler_config: SamplerConfig,
    extraction_config: ExtractionConfig,
) -> BatchSummary:
    scored = [r for r in records if r.error is None]
    mean_f1, stderr_f1 = aggregate([r.f1 for r in scored])
    return BatchSummary(
        n=len(scored),
        failed=len(records) - len(scored),
        mean_f1=mean_f1,
        stderr_f1=stderr_f1,
        by_size=_buckets(scored, lambda r: size_bucket(r.truth_size)),
        by_density=_buckets(
            scored, lambda r: None if r.truth_density is None else density_bucket(r.truth_density)
        ),
        config=config_echo(sampler_config, extraction_config),
    )


def config_echo(sampler_config: SamplerConfig, extraction_config: ExtractionConfig) -> Dict[str, object]:
    return {
        "hops": sampler_config.hops,
        "prune_cycle": sampler_config.prune_cycle,
        "prune_size": sampler_config.prune_size,
        "max_size": extraction_config.max_size,
        "mode": extraction_config.mode,
        "truth_size": extraction_config.truth_size,
        "seed": sampler_config.seed,
    }
