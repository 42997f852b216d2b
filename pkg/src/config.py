"""
Runtime configuration
Environment-driven defaults shared by the CLI, the sweep runner and the demos
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL = os.getenv('EMBEDLAB_LOG_LEVEL', 'INFO')
DEFAULT_WORKERS = int(os.getenv('EMBEDLAB_WORKERS', '1'))
OUTPUT_DIR = os.getenv('EMBEDLAB_OUTPUT_DIR', 'data/sweeps')
BASE_SEED = int(os.getenv('EMBEDLAB_BASE_SEED', '0'))

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def configure_logging(level: Optional[str] = None) -> None:
    """
    Configure root logging once for scripts and the CLI.

    Library modules only create their own loggers; they never call this.

    Args:
        level: Level name, falls back to EMBEDLAB_LOG_LEVEL
    """
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.INFO),
        format=LOG_FORMAT,
    )
