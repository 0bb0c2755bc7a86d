"""Evaluation grids and an order-preserving parallel map."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional

import numpy as np

from ..config import config
from ..errors import ValidationError


@dataclass(frozen=True)
class GeometricGrid:
    """n points spaced geometrically from start to stop (inclusive)."""

    start: float
    stop: float
    n: int

    def __post_init__(self):
        if not (0 < self.start < self.stop and math.isfinite(self.stop)):
            raise ValidationError(f"Geometric grid needs 0 < start < stop, got {self.start}, {self.stop}")
        if self.n < 2:
            raise ValidationError(f"Grid needs at least 2 points, got {self.n}")

    def points(self) -> np.ndarray:
        return np.geomspace(self.start, self.stop, self.n)

    def describe(self) -> Dict[str, Any]:
        return {"kind": "geometric", "start": self.start, "stop": self.stop, "n": self.n}


@dataclass(frozen=True)
class UniformGrid:
    """n equally spaced points from start to stop (inclusive)."""

    start: float
    stop: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise ValidationError(f"Uniform grid needs start < stop, got {self.start}, {self.stop}")
        if self.n < 2:
            raise ValidationError(f"Grid needs at least 2 points, got {self.n}")

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n)

    def describe(self) -> Dict[str, Any]:
        return {"kind": "uniform", "start": self.start, "stop": self.stop, "n": self.n}


def parallel_map(func: Callable[[Any], Any], items: Iterable[Any], workers: Optional[int] = None) -> List[Any]:
    """
    Apply func to every item, in input order.

    Uses a thread pool when more than one worker is configured; results and
    their order do not depend on the worker count.

    Args:
        func: Function of one item
        items: Items to evaluate
        workers: Thread count (default from config)

    Returns:
        List of results in input order
    """
    items = list(items)
    workers = config.workers if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="grid-worker") as executor:
        return list(executor.map(func, items))
