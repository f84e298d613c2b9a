"""
Utility functions for random streams, result serialization and logging.
"""

import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import numpy as np


def seed_stream(seed: int, *path: int) -> np.random.SeedSequence:
    """
    Build the seed sequence for one node of the random-stream tree.

    Every random stream in the package is addressed by the master seed and a
    path of non-negative integers, so adding scenarios, runs or replications
    never perturbs the streams of existing ones.

    Args:
        seed: Master seed
        *path: Spawn key, e.g. (scenario, run, 1, b)

    Returns:
        SeedSequence for that node
    """
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))


def make_rng(seed: int, *path: int) -> np.random.Generator:
    """Generator seeded from ``seed_stream(seed, *path)``."""
    return np.random.default_rng(seed_stream(seed, *path))


def convert_numpy(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays (and tuples) to JSON-friendly types."""
    if isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, dict):
        return {str(key): convert_numpy(value) for key, value in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [convert_numpy(item) for item in obj]
    return obj


def dumps_results(results: Dict) -> str:
    """Serialize a results dictionary to stable, indented JSON text."""
    return json.dumps(convert_numpy(results), indent=2) + "\n"


def save_results(results: Dict, filepath: str):
    """
    Save results dictionary to JSON file.

    Args:
        results: Dictionary of results
        filepath: Output file path
    """
    path = Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        f.write(dumps_results(results))

    get_logger().log(f"Results saved to {filepath}")


class Logger:
    """Timestamped line logger writing to stderr and, optionally, a log file."""

    LEVELS = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40}

    def __init__(self, log_file: Optional[str] = None, level: str = "INFO",
                 stream: Optional[TextIO] = None):
        """
        Initialize logger.

        Args:
            log_file: Optional path of a log file (truncated on creation)
            level: Minimum level that is emitted
            stream: Console stream; stderr by default so stdout stays machine-readable
        """
        self.threshold = self.LEVELS[level.upper()]
        self.stream = stream
        self.log_file = Path(log_file) if log_file else None

        if self.log_file is not None:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.log_file, 'w') as f:
                f.write("Archimedean copula test log\n")
                f.write(f"Started: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
                f.write("=" * 70 + "\n\n")

    def log(self, message: str, level: str = "INFO"):
        """
        Log a message.

        Args:
            message: Message to log
            level: Log level (DEBUG, INFO, WARNING, ERROR)
        """
        if self.LEVELS[level] < self.threshold:
            return

        timestamp = datetime.now().strftime("%H:%M:%S")
        log_entry = f"[{timestamp}] {level}: {message}\n"

        stream = self.stream if self.stream is not None else sys.stderr
        stream.write(log_entry)

        if self.log_file is not None:
            with open(self.log_file, 'a') as f:
                f.write(log_entry)

    def debug(self, message: str):
        self.log(message, "DEBUG")

    def info(self, message: str):
        self.log(message, "INFO")

    def warning(self, message: str):
        self.log(message, "WARNING")

    def error(self, message: str):
        self.log(message, "ERROR")


_LOGGER = Logger(level="WARNING")


def get_logger() -> Logger:
    """Return the process-wide logger."""
    return _LOGGER


def configure_logger(log_file: Optional[str] = None, level: str = "WARNING") -> Logger:
    """
    Replace the process-wide logger.

    Args:
        log_file: Optional log file path
        level: Minimum emitted level

    Returns:
        The new logger
    """
    global _LOGGER
    _LOGGER = Logger(log_file=log_file, level=level)
    return _LOGGER


def print_section_header(title: str, stream: Optional[TextIO] = None):
    """Print formatted section header (to stderr by default)."""
    out = stream if stream is not None else sys.stderr
    out.write("\n" + "=" * 70 + "\n")
    out.write(title.center(70) + "\n")
    out.write("=" * 70 + "\n\n")

