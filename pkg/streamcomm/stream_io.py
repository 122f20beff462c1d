"""Edge-stream and ground-truth community I/O.

Edge lists follow the SNAP ``ungraph.txt`` layout: one edge per line, two
whitespace-separated non-negative integers, ``#`` comment lines. Community
files hold one community per line. Both may be gzipped.
"""

import gzip
import json
import logging
from pathlib import Path
from typing import IO, Iterable, Iterator, List, NamedTuple, Optional, Union

import numpy as np

from .config import DEFAULT_CASES, DEFAULT_MIN_COMMUNITY_SIZE, DEFAULT_QUERIES_PER_CASE
from .errors import CommunityParseError, EdgeParseError
from .models import CommunityTable, TestCase

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class EdgeRecord(NamedTuple):
    u: int
    v: int


class Skip(NamedTuple):
    reason: str


COMMENT = Skip("comment")
BLANK = Skip("blank")
SELF_LOOP = Skip("self-loop")


def open_text(path: PathLike, mode: str = "rt") -> IO[str]:
    """Open a text file, transparently decompressing ``.gz`` paths"""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8")
    return open(path, mode.replace("t", ""), encoding="utf-8")


def _node_id(token: str, lineno: int, error=EdgeParseError) -> int:
    try:
        node = int(token)
    except ValueError:
        raise error(lineno, f"non-integer node id {token!r}")
    if node < 0:
        raise error(lineno, f"negative node id {node}")
    return node


def parse_edge_line(line: str, lineno: int = 0) -> Union[EdgeRecord, Skip]:
    """Parse one edge-list line into an EdgeRecord or a Skip marker"""
    stripped = line.strip()
    if not stripped:
        return BLANK
    if stripped.startswith("#"):
        return COMMENT
    tokens = stripped.split()
    if len(tokens) != 2:
        raise EdgeParseError(lineno, f"expected 2 node ids, got {len(tokens)} tokens")
    u = _node_id(tokens[0], lineno)
    v = _node_id(tokens[1], lineno)
    if u == v:
        return SELF_LOOP
    return EdgeRecord(u, v)


class EdgeStream:
    """Single-pass iterator over the edges of an edge-list file.

    Reads line by line; ``position`` (lines consumed) only ever grows and a
    second iteration is refused, so one stream object is one pass.
    """

    def __init__(self, path: PathLike):
        self.path = Path(path)
        self.position = 0
        self.edges = 0
        self.self_loops = 0
        self.skipped = 0
        self._consumed = False

    def __iter__(self) -> Iterator[EdgeRecord]:
        if self._consumed:
            raise RuntimeError(f"edge stream {self.path} was already consumed")
        self._consumed = True
        logger.info(f"Reading edge stream {self.path}")
        with open_text(self.path) as handle:
            for line in handle:
                self.position += 1
                parsed = parse_edge_line(line, self.position)
                if isinstance(parsed, EdgeRecord):
                    self.edges += 1
                    yield parsed
                    continue
                self.skipped += 1
                if parsed is SELF_LOOP:
                    if self.self_loops == 0:
                        logger.warning(f"Dropping self-loop at {self.path}:{self.position}")
                    self.self_loops += 1
        if self.self_loops:
            logger.warning(f"Dropped {self.self_loops} self-loop lines from {self.path}")
        logger.info(f"Finished edge stream {self.path}: {self.edges} edges, {self.position} lines")


def write_edges(path: PathLike, edges: Iterable[tuple]) -> int:
    count = 0
    with open_text(path, "wt") as out:
        for u, v in edges:
            out.write(f"{u}\t{v}\n")
            count += 1
    return count


def load_communities(path: PathLike, min_size: int = DEFAULT_MIN_COMMUNITY_SIZE) -> CommunityTable:
    """Load one community per line, keeping those with at least ``min_size`` members"""
    communities = []
    dropped = 0
    with open_text(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            tokens = line.split()
            if not tokens:
                continue
            members = frozenset(_node_id(t, lineno, CommunityParseError) for t in tokens)
            if len(members) < min_size:
                dropped += 1
                continue
            communities.append(members)
    logger.info(f"Loaded {len(communities)} communities from {path} ({dropped} below size {min_size})")
    return CommunityTable(communities=communities, source=str(path))


def write_communities(path: PathLike, communities: Iterable[Iterable[int]]) -> None:
    with open_text(path, "wt") as out:
        for community in communities:
            out.write("\t".join(str(node) for node in sorted(community)) + "\n")


SIZE_BUCKETS = ((0, 100, "[0,100)"), (100, 500, "[100,500)"), (500, 1000, "[500,1000)"), (1000, None, ">=1000"))


def size_bucket(size: int) -> str:
    for low, high, label in SIZE_BUCKETS:
        if size >= low and (high is None or size < high):
            return label
    raise ValueError(f"negative community size {size}")


def size_distribution(table: CommunityTable) -> dict:
    """Share of communities per size bucket"""
    counts = {label: 0 for _, _, label in SIZE_BUCKETS}
    for community in table.communities:
        counts[size_bucket(len(community))] += 1
    total = len(table.communities)
    if total == 0:
        return {label: 0.0 for label in counts}
    return {label: count / total for label, count in counts.items()}


def shuffle_stream(in_path: PathLike, seed: int, out_path: PathLike) -> int:
    """Write a seeded uniform permutation of the input edges.

    Offline preprocessing: the whole edge list is held in memory, outside the
    streaming budget of the detector.
    """
    edges = list(EdgeStream(in_path))
    rng = np.random.default_rng(seed)
    # permute positions, not ids: node ids may exceed int64
    count = write_edges(out_path, (edges[i] for i in rng.permutation(len(edges))))
    logger.info(f"Shuffled {count} edges from {in_path} into {out_path} (seed={seed})")
    return count


def select_test_cases(
    table: CommunityTable,
    n: int = DEFAULT_CASES,
    q: int = DEFAULT_QUERIES_PER_CASE,
    seed: Optional[int] = None,
) -> List[TestCase]:
    """Pick min(n, |table|) communities without replacement and q query nodes in each"""
    if q < 1:
        raise ValueError(f"queries per case must be >= 1, got {q}")
    if n < 0:
        raise ValueError(f"number of cases must be >= 0, got {n}")
    rng = np.random.default_rng(seed)
    count = min(n, len(table.communities))
    chosen = rng.choice(len(table.communities), size=count, replace=False) if count else []
    cases = []
    for index in chosen:
        truth = table.communities[int(index)]
        if q > len(truth):
            raise ValueError(f"community {int(index)} has {len(truth)} members, fewer than q={q}")
        members = sorted(truth)
        picked = rng.choice(len(members), size=q, replace=False)
        cases.append(TestCase(
            community_index=int(index),
            truth=truth,
            queries=frozenset(members[int(i)] for i in picked),
        ))
    return cases


def write_test_cases(path: PathLike, cases: Iterable[TestCase]) -> None:
    with open_text(path, "wt") as out:
        for case in cases:
            out.write(case.model_dump_json() + "\n")


def read_test_cases(path: PathLike) -> List[TestCase]:
    with open_text(path) as handle:
        return [TestCase.model_validate(json.loads(line)) for line in handle if line.strip()]
