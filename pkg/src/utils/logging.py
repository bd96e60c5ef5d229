import os
import logging
from typing import Optional

from src.config import config

# Standard log files per component
LOG_FILES = {
    'bench': 'bench.log',          # Episodes, sweeps and reports
    'oracle': 'oracle.log',        # Clairvoyant search progress
    'api': 'api.log',              # Flask backend logs
    'config': 'config.log'         # Configuration changes
}


def setup_logger(component: str, log_dir: Optional[str] = None, level: int = logging.INFO) -> logging.Logger:
    """
    Set up a logger for a specific component

    Args:
        component: Name of the component ('bench', 'oracle', 'api', etc.)
        log_dir: Optional custom log directory
        level: Logging level for the logger and both handlers

    Returns:
        logging.Logger: Configured logger instance

    Raises:
        ValueError: If component is unknown
    """
    # Use the log directory from config if not specified
    log_dir = log_dir or config.log_dir
    os.makedirs(log_dir, exist_ok=True)

    component = component.lower()
    if component not in LOG_FILES:
        raise ValueError(f"Unknown component: {component}")

    logger = logging.getLogger(component.upper())
    logger.setLevel(level)

    # Clear any existing handlers
    logger.handlers = []

    file_handler = logging.FileHandler(
        os.path.join(log_dir, LOG_FILES[component])
    )
    file_handler.setLevel(level)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(message)s'
    )

    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    logger.addHandler(console_handler)

    return logger
