#!/usr/bin/env python3
"""
Tests for grids, output writers, the result cache and error mapping.
"""

import json
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import numpy as np

from helpers import main_guard
from src.errors import (
    DomainError,
    QuadratureError,
    SeriesConvergenceError,
    ValidationError,
    ZastavnyiError,
    exit_code_for,
)
from src.middleware.tracking import RunTracker
from src.services.result_cache import ResultCache, cache_key_for_panel
from src.spectral import cauchy_spectral_series
from src.utils.grids import GeometricGrid, UniformGrid, parallel_map
from src.utils.output import columns_of, format_number, render_csv, render_json, render_json_lines


def test_grids():
    uniform = UniformGrid(0.0, 1.0, 5)
    assert np.array_equal(uniform.points(), np.array([0.0, 0.25, 0.5, 0.75, 1.0]))
    geometric = GeometricGrid(1e-3, 1e3, 7)
    assert np.allclose(geometric.points(), 10.0 ** np.arange(-3, 4), rtol=1e-14)
    assert geometric.describe() == {"kind": "geometric", "start": 1e-3, "stop": 1e3, "n": 7}
    for bad in (lambda: GeometricGrid(0.0, 1.0, 5), lambda: UniformGrid(1.0, 0.0, 5), lambda: UniformGrid(0.0, 1.0, 1)):
        try:
            bad()
        except ValidationError:
            continue
        raise AssertionError("invalid grid accepted")


def test_parallel_map_keeps_order():
    items = list(range(50))
    serial = parallel_map(lambda x: x * x, items, workers=1)
    threaded = parallel_map(lambda x: x * x, items, workers=4)
    assert serial == threaded == [x * x for x in items]


def test_number_formatting_round_trips():
    value = 0.1 + 0.2
    assert float(format_number(value)) == value
    assert format_number(1.0) == "1"
    assert format_number(True) == "true"
    assert format_number(None) == ""
    assert format_number(float("-inf")) == "-inf"


def test_render_csv_and_json_lines():
    rows = [{"t": 0.0, "K": 1.0}, {"t": 0.5, "K": -0.25, "extra": 3}]
    assert columns_of(rows) == ["t", "K", "extra"]
    assert render_csv(rows, ["t", "K"]) == "t,K\n0,1\n0.5,-0.25\n"
    text = render_json_lines([{"b": 1, "a": float("nan")}, {"z": np.float64(2.5), "v": (1, 2)}])
    lines = text.splitlines()
    assert lines[0] == '{"a": "nan", "b": 1}'
    assert json.loads(lines[1]) == {"v": [1, 2], "z": 2.5}
    assert text.endswith("\n")


def test_render_json_is_strict():
    def reject(constant):
        raise ValueError(f"non-standard JSON constant {constant}")

    text = render_json({"inf": float("inf"), "grid": np.array([1.0, np.nan]), "n": np.int64(3)})
    assert json.loads(text, parse_constant=reject) == {"inf": "inf", "grid": [1.0, "nan"], "n": 3}


def test_tracker_counts_from_worker_threads():
    tracker = RunTracker()
    parallel_map(lambda _: tracker.track_hankel(3), range(2000), workers=8)
    stats = tracker.get_stats()
    assert stats["hankel_transforms"] == 2000
    assert stats["hankel_panels"] == 6000
    assert stats["mean_hankel_panels"] == 3.0


def test_result_cache():
    cache = ResultCache(max_size=2)
    cache.set("a", 1)
    cache.set("b", 2)
    cache.set("c", 3)
    assert cache.get("a") is None
    assert cache.get("b") == 2 and cache.get("c") == 3
    cache.set("expired", 4, ttl=-1.0)
    assert cache.get("expired") is None
    stats = cache.get_stats()
    assert stats["max_size"] == 2
    assert stats["hits"] == 2
    cache.clear()
    assert cache.get_stats()["size"] == 0
    assert cache_key_for_panel("b", 512) == "figure1:B:512"


def test_exit_codes_for_errors():
    assert exit_code_for(ValidationError("x")) == 1
    assert exit_code_for(DomainError("x")) == 1
    assert exit_code_for(QuadratureError("x", partial_estimate=0.5)) == 2
    assert exit_code_for(RuntimeError("x")) == 2
    assert issubclass(DomainError, ValueError)
    assert issubclass(QuadratureError, ZastavnyiError)


def test_series_term_cap_is_reported():
    try:
        cauchy_spectral_series(1.0, 0.7, 2.3, 1.0, 2, max_terms=1)
    except SeriesConvergenceError as e:
        assert e.partial_sum is not None
        return
    raise AssertionError("term cap not enforced")


if __name__ == "__main__":
    main_guard(globals(), "utilities")
