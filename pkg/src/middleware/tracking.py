"""Run tracking middleware: logging setup, counters and timing."""

import time
import logging
import threading
from typing import Dict, Any, Callable
from functools import wraps

from ..config import config

logger = logging.getLogger(__name__)

_LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

_COUNTERS = (
    "hankel_transforms",
    "hankel_panels",
    "series_evaluations",
    "series_delegations",
    "pole_perturbations",
    "verdicts_issued",
    "refutations",
)


def setup_logging() -> None:
    """Configure root logging once, to the configured file or stderr."""
    level = getattr(logging, config.log_level, logging.WARNING)
    if config.log_file:
        logging.basicConfig(filename=config.log_file, level=level, format=_LOG_FORMAT)
    else:
        # basicConfig defaults to stderr; stdout is reserved for CSV/JSON output
        logging.basicConfig(level=level, format=_LOG_FORMAT)


class RunTracker:
    """Counters for the expensive numerical paths taken during a run."""

    def __init__(self):
        """Initialize the tracker."""
        self.stats = {name: 0 for name in _COUNTERS}
        self._lock = threading.Lock()

    def track_hankel(self, panels: int):
        """Track one Hankel transform and the panels it integrated."""
        with self._lock:
            self.stats["hankel_transforms"] += 1
            self.stats["hankel_panels"] += panels
        logger.debug(f"Hankel transform used {panels} panels")

    def track_series(self, delegated: bool):
        """Track a Cauchy series evaluation."""
        with self._lock:
            self.stats["series_evaluations"] += 1
            if delegated:
                self.stats["series_delegations"] += 1

    def track_pole_perturbation(self, lam: float):
        """Track a pole-collision perturbation."""
        with self._lock:
            self.stats["pole_perturbations"] += 1
        logger.warning(f"Series exponent collision at lambda={lam}; averaging perturbed evaluations")

    def track_verdict(self, method: str, refuted: bool):
        """Track an issued positive-definiteness verdict."""
        with self._lock:
            self.stats["verdicts_issued"] += 1
            if refuted:
                self.stats["refutations"] += 1
        logger.info(f"Verdict issued: method={method}, refuted={refuted}")

    def get_stats(self) -> Dict[str, Any]:
        """Get tracker statistics."""
        with self._lock:
            stats = dict(self.stats)
        transforms = stats["hankel_transforms"]
        mean_panels = stats["hankel_panels"] / transforms if transforms > 0 else 0.0
        return {
            **stats,
            "mean_hankel_panels": mean_panels,
        }

    def reset_stats(self):
        """Reset statistics."""
        with self._lock:
            self.stats = {name: 0 for name in _COUNTERS}


# Global tracker instance
_tracker = RunTracker()


def get_tracker() -> RunTracker:
    """Get the global tracker instance."""
    return _tracker


def with_timing(func: Callable) -> Callable:
    """
    Decorator to log the duration and failures of a tool function.

    Args:
        func: Function to wrap

    Returns:
        Wrapped function with timing logged at DEBUG level
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            duration = time.perf_counter() - start_time
            logger.debug(f"{func.__name__} executed in {duration:.2f}s")
            return result
        except Exception as e:
            logger.error(f"{func.__name__} failed: {str(e)}")
            raise

    return wrapper
