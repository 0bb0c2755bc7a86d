"""Curve data for the three operator comparison panels (Matern, Cauchy, Wendland)."""

import logging
from typing import Any, Dict, List, Optional, Sequence

from ..errors import ValidationError, ZastavnyiError
from ..middleware.tracking import with_timing
from .evaluate import error_result, evaluate_operator

logger = logging.getLogger(__name__)

FIGURE1_COLUMNS = ["panel", "family", "eps", "t", "K", "phi_beta1", "phi_beta2"]
FIGURE1_GRID = {"kind": "uniform", "start": 0.0, "stop": 1.0, "n": 512}

FIGURE1_PANELS: Dict[str, Dict[str, Any]] = {
    "A": {
        "family": "matern",
        "params": {"nu": 0.5},
        "beta1": 0.075,
        "beta2": 0.15,
        "eps_values": (1.0, -2.0),
    },
    "B": {
        "family": "cauchy",
        "params": {"delta": 0.6, "lambda": 2.5},
        "beta1": 0.2,
        "beta2": 0.3,
        "eps_values": (0.7, -1.25),
    },
    "C": {
        "family": "wendland",
        "params": {"kappa": 0.0, "mu": 4.5},
        "beta1": 0.4,
        "beta2": 0.6,
        "eps_values": (1.0, -2.0),
    },
}

FIGURE1_NOTES = [
    "t-range [0, 1] is inferred from the compact supports and scales shown; the plotting grid is not stated",
    "panel B uses the caption values eps = 0.7 and eps = -1.25; the accompanying text lists eps = -0.7 and 1.25",
]


def figure1_metadata(panels: Sequence[str], n: int) -> Dict[str, Any]:
    """Metadata record describing the panels and grid that were emitted."""
    return {
        "record": "figure1_metadata",
        "panels": {key: {**FIGURE1_PANELS[key], "eps_values": list(FIGURE1_PANELS[key]["eps_values"])} for key in panels},
        "grid": {**FIGURE1_GRID, "n": n},
        "notes": FIGURE1_NOTES,
    }


@with_timing
def figure1(panels: Optional[Sequence[str]] = None, n: int = 512) -> Dict[str, Any]:
    """
    Emit operator curves for the comparison panels.

    Each panel mixes two scales of one family with two exponents; for every
    curve the rows carry K and the two rescaled members.

    Args:
        panels: Subset of "A", "B", "C" (default all, in order)
        n: Number of uniform points on [0, 1]

    Returns:
        Dictionary with metadata, rows and per-curve minima
    """
    try:
        keys = [p.upper() for p in (panels or list(FIGURE1_PANELS))]
        unknown = [k for k in keys if k not in FIGURE1_PANELS]
        if unknown:
            raise ValidationError(f"Unknown figure panels {unknown}; choose from {list(FIGURE1_PANELS)}")

        rows: List[Dict[str, Any]] = []
        curves: List[Dict[str, Any]] = []
        for key in keys:
            panel = FIGURE1_PANELS[key]
            for eps in panel["eps_values"]:
                result = evaluate_operator(
                    panel["family"],
                    panel["params"],
                    eps,
                    panel["beta1"],
                    panel["beta2"],
                    grid_min=FIGURE1_GRID["start"],
                    grid_max=FIGURE1_GRID["stop"],
                    grid_n=n,
                )
                if "error" in result:
                    return result
                for row in result["rows"]:
                    rows.append({"panel": key, "family": panel["family"], "eps": eps, **row})
                curves.append(
                    {
                        "panel": key,
                        "eps": eps,
                        "value_at_zero": result["rows"][0]["K"],
                        "minimum": result["minimum"],
                        "argmin": result["argmin"],
                    }
                )
                logger.debug(f"Panel {key} eps={eps}: minimum {result['minimum']:.6g}")

        return {
            "metadata": figure1_metadata(keys, n),
            "columns": FIGURE1_COLUMNS,
            "rows": rows,
            "curves": curves,
        }
    except ZastavnyiError as e:
        return error_result(e)
