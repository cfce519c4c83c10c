# gridcast/utils/log_utils.py
import logging
import os
import sys
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    """Install a single stderr handler on the gridcast logger"""
    level_name = (level or os.getenv("GRIDCAST_LOG_LEVEL", "INFO")).upper()
    logger = logging.getLogger("gridcast")
    logger.setLevel(getattr(logging, level_name, logging.INFO))

    # Re-running the CLI in one process (tests) must not stack handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.propagate = False
