import os
import sys
import logging
from typing import Optional

from dotenv import load_dotenv

# Defaults of the detection pipeline (hops, pruning cycle, pruning size, community bound)
DEFAULT_HOPS = 4
DEFAULT_PRUNE_CYCLE = 100_000
DEFAULT_PRUNE_SIZE = 3_000
DEFAULT_MAX_SIZE = 500

# Experiment protocol
DEFAULT_MIN_COMMUNITY_SIZE = 20
DEFAULT_CASES = 500
DEFAULT_QUERIES_PER_CASE = 3
DEFAULT_SEED = 0

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger; output goes to stderr so stdout stays machine-readable."""
    # Load environment variables (only LOG_LEVEL is read from them)
    load_dotenv()
    level = level or os.getenv("LOG_LEVEL", "INFO")
    logging.basicConfig(
        level=level.upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
