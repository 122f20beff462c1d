import sys
import logging

from streamcomm.config import configure_logging
from streamcomm.cli import main

# Configure root Python logger (level from LOG_LEVEL, loaded from .env if present)
configure_logging()

startup_logger = logging.getLogger("streamcomm.startup")

if __name__ == "__main__":
    startup_logger.debug(f"Starting with argv={sys.argv[1:]}")
    sys.exit(main())
