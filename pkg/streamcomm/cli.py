"""Command-line surface: shuffle, detect, extract, eval, generate.

JSON goes to stdout, logs and the human summary to stderr.
"""

import argparse
import json
import logging
import sys
import tempfile
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import (
    DEFAULT_CASES,
    DEFAULT_HOPS,
    DEFAULT_MAX_SIZE,
    DEFAULT_MIN_COMMUNITY_SIZE,
    DEFAULT_PRUNE_CYCLE,
    DEFAULT_PRUNE_SIZE,
    DEFAULT_QUERIES_PER_CASE,
    DEFAULT_SEED,
)
from .evaluation import config_echo, run_batch, run_detection
from .extraction import extract
from .models import ExtractionConfig, SamplerConfig
from .sampling import read_subgraph, write_subgraph
from .stream_io import (
    load_communities,
    open_text,
    read_test_cases,
    select_test_cases,
    shuffle_stream,
    size_distribution,
    write_communities,
    write_edges,
    write_test_cases,
)
from .synthetic import planted_partition

logger = logging.getLogger(__name__)


def _query_list(text: str) -> List[int]:
    try:
        queries = [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid query list {text!r}")
    if not queries:
        raise argparse.ArgumentTypeError("at least one query node is required")
    return queries


def _add_sampler_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--hops", type=int, default=DEFAULT_HOPS, help="number of hops k")
    parser.add_argument("--prune-cycle", type=int, default=DEFAULT_PRUNE_CYCLE, help="edges between prunings")
    parser.add_argument("--prune-size", type=int, default=DEFAULT_PRUNE_SIZE, help="nodes kept by a pruning")


def _add_extraction_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-size", type=int, default=DEFAULT_MAX_SIZE, help="community size upper bound b")
    parser.add_argument("--mode", choices=["approx", "local", "truth-size"], default="approx")
    parser.add_argument("--truth-size", type=int, default=None, help="cut size for --mode truth-size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamcomm", description="Local community detection in edge streams")
    sub = parser.add_subparsers(dest="command", required=True)

    shuffle = sub.add_parser("shuffle", help="write a seeded permutation of an edge list")
    shuffle.add_argument("--input", required=True, type=Path)
    shuffle.add_argument("--output", required=True, type=Path)
    shuffle.add_argument("--seed", type=int, default=DEFAULT_SEED)

    detect = sub.add_parser("detect", help="detect the community of a query set in one stream pass")
    detect.add_argument("--stream", required=True, type=Path)
    detect.add_argument("--query", required=True, type=_query_list, help="comma-separated query node ids")
    _add_sampler_flags(detect)
    _add_extraction_flags(detect)
    detect.add_argument("--dump-subgraph", type=Path, default=None)

    extract_cmd = sub.add_parser("extract", help="extract a community from a subgraph dump")
    extract_cmd.add_argument("--subgraph", required=True, type=Path)
    extract_cmd.add_argument("--query", required=True, type=_query_list)
    extract_cmd.add_argument("--hops", type=int, default=DEFAULT_HOPS)
    _add_extraction_flags(extract_cmd)

    evaluate = sub.add_parser("eval", help="run the batch experiment protocol")
    evaluate.add_argument("--stream", required=True, type=Path)
    evaluate.add_argument("--communities", required=True, type=Path)
    evaluate.add_argument("--min-size", type=int, default=DEFAULT_MIN_COMMUNITY_SIZE)
    evaluate.add_argument("--cases", type=int, default=DEFAULT_CASES)
    evaluate.add_argument("--queries-per-case", type=int, default=DEFAULT_QUERIES_PER_CASE)
    evaluate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    evaluate.add_argument("--repetitions", type=int, default=1)
    evaluate.add_argument("--shuffle", action="store_true", help="reshuffle the stream for every repetition")
    evaluate.add_argument("--parallel", type=int, default=1, help="extraction worker processes")
    evaluate.add_argument("--no-times", action="store_true", help="omit wall-clock fields from the output")
    evaluate.add_argument("--cases-file", type=Path, default=None, help="replay test cases from a JSONL file instead of drawing them")
    evaluate.add_argument("--cases-out", type=Path, default=None, help="save the test cases of every repetition as JSONL")
    _add_sampler_flags(evaluate)
    _add_extraction_flags(evaluate)
    evaluate.add_argument("--out", required=True, type=Path)

    generate = sub.add_parser("generate", help="write a planted-partition edge list and its communities")
    generate.add_argument("--communities", type=int, required=True)
    generate.add_argument("--size", type=int, required=True)
    generate.add_argument("--p-in", type=float, required=True)
    generate.add_argument("--p-out", type=float, required=True)
    generate.add_argument("--seed", type=int, default=DEFAULT_SEED)
    generate.add_argument("--edges-out", type=Path, required=True)
    generate.add_argument("--communities-out", type=Path, required=True)

    return parser


def _configs(args, parser, per_case_truth: bool = False):
    if args.mode == "truth-size" and args.truth_size is None and not per_case_truth:
        parser.error("--mode truth-size requires --truth-size")
    if args.truth_size is not None and args.mode != "truth-size":
        parser.error("--truth-size only applies to --mode truth-size")
    try:
        sampler_config = SamplerConfig(
            hops=args.hops,
            prune_cycle=getattr(args, "prune_cycle", DEFAULT_PRUNE_CYCLE),
            prune_size=getattr(args, "prune_size", DEFAULT_PRUNE_SIZE),
            seed=getattr(args, "seed", DEFAULT_SEED),
        )
        extraction_config = ExtractionConfig(
            hops=args.hops,
            max_size=args.max_size,
            mode=args.mode,
            truth_size=args.truth_size,
        )
    except ValidationError as e:
        parser.error(str(e))
    return sampler_config, extraction_config


def _print_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")
    sys.stdout.flush()


def cmd_shuffle(args) -> int:
    count = shuffle_stream(args.input, args.seed, args.output)
    _print_json({"edges": count, "seed": args.seed, "output": str(args.output)})
    return 0


def _detection_payload(result, sampler_config, extraction_config, times=None) -> dict:
    payload = {
        "community": sorted(result.community),
        "size": result.size,
        "score": result.score,
        "mode": result.mode,
        "candidate_index": result.candidate_index,
        "times": times,
        "config": config_echo(sampler_config, extraction_config),
    }
    if result.warning:
        payload["warning"] = result.warning
    return payload


def cmd_detect(args, parser) -> int:
    sampler_config, extraction_config = _configs(args, parser)
    detection = run_detection(args.stream, args.query, sampler_config, extraction_config)
    if args.dump_subgraph:
        write_subgraph(args.dump_subgraph, detection.graph, detection.degrees)
        logger.info(f"Wrote subgraph dump to {args.dump_subgraph}")
    _print_json(_detection_payload(detection.result, sampler_config, extraction_config, detection.times))
    return 0


def cmd_extract(args, parser) -> int:
    sampler_config, extraction_config = _configs(args, parser)
    graph, degrees = read_subgraph(args.subgraph)
    result = extract(graph, degrees, args.query, extraction_config)
    _print_json(_detection_payload(result, sampler_config, extraction_config))
    return 0


def _repetition_path(path: Path, repetition: int, repetitions: int) -> Path:
    """cases.jsonl -> cases.jsonl when run once, cases.rep1.jsonl for repetition 1 of many"""
    if repetitions == 1:
        return path
    return path.with_name(f"{path.stem}.rep{repetition}{path.suffix}")


def cmd_eval(args, parser) -> int:
    sampler_config, extraction_config = _configs(args, parser, per_case_truth=True)
    table = load_communities(args.communities, args.min_size)
    sizes = size_distribution(table)
    summaries = []
    with open_text(args.out, "wt") as out, tempfile.TemporaryDirectory() as scratch:
        for repetition in range(args.repetitions):
            seed = args.seed + repetition
            stream = args.stream
            if args.shuffle:
                stream = Path(scratch) / f"stream-{repetition}.txt"
                shuffle_stream(args.stream, seed, stream)
            if args.cases_file is not None:
                cases = read_test_cases(args.cases_file)
            else:
                cases = select_test_cases(table, args.cases, args.queries_per_case, seed)
            if args.cases_out is not None:
                write_test_cases(_repetition_path(args.cases_out, repetition, args.repetitions), cases)
            logger.info(f"Repetition {repetition}: {len(cases)} cases, seed {seed}")
            records, summary = run_batch(
                stream,
                cases,
                sampler_config,
                extraction_config,
                parallel=args.parallel,
                with_times=not args.no_times,
            )
            summary = summary.model_copy(update={
                "repetition": repetition,
                "seed": seed,
                "community_sizes": sizes,
            })
            for record in records:
                out.write(record.model_dump_json(exclude_none=True) + "\n")
            out.write(summary.model_dump_json() + "\n")
            summaries.append(summary)
            if summary.n:
                print(
                    f"repetition {repetition}: F1 {summary.mean_f1:.4f} ± {summary.stderr_f1:.4f} (n={summary.n})",
                    file=sys.stderr,
                )
            else:
                print(f"repetition {repetition}: no scored cases (n=0)", file=sys.stderr)
    for summary in summaries:
        _print_json(json.loads(summary.model_dump_json()))
    return 0


def cmd_generate(args) -> int:
    edges, communities = planted_partition(args.communities, args.size, args.p_in, args.p_out, args.seed)
    write_edges(args.edges_out, edges)
    write_communities(args.communities_out, communities)
    _print_json({"edges": len(edges), "communities": len(communities), "seed": args.seed})
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "shuffle":
            return cmd_shuffle(args)
        if args.command == "detect":
            return cmd_detect(args, parser)
        if args.command == "extract":
            return cmd_extract(args, parser)
        if args.command == "eval":
            return cmd_eval(args, parser)
        return cmd_generate(args)
    except (OSError, OverflowError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1
