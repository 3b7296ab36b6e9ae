"""
Centralized logging system for skewsym
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler


def setup_logging(level=logging.INFO, log_file: Optional[Path] = None):
    """Setup logging configuration"""

    # Create root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)

    # Remove existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    # Console handler on stderr; stdout carries JSON reports
    console_handler = RichHandler(
        console=Console(file=sys.stderr),
        show_time=False,
        show_path=False,
        markup=False,
    )
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter('%(name)s | %(message)s'))
    root_logger.addHandler(console_handler)

    # File handler for detailed logs
    if log_file is not None:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_formatter = logging.Formatter(
            '%(asctime)s | %(levelname)s | %(name)s | %(funcName)s:%(lineno)d | %(message)s'
        )
        file_handler.setFormatter(file_formatter)
        root_logger.addHandler(file_handler)

    logger = logging.getLogger(__name__)
    if log_file is not None:
        logger.debug(f"Logging initialized - Log file: {log_file}")
    else:
        logger.debug("Logging initialized - console only")

    return log_file


def get_logger(name):
    """Get a logger instance"""
    return logging.getLogger(name)
