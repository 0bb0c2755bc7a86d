"""Kernel, operator and spectral density evaluation tools."""

import logging
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ValidationError, ZastavnyiError, exit_code_for
from ..kernels.families import KernelFamily, ScaledKernel, family_from_name
from ..kernels.operator import ZastavnyiSpec
from ..middleware.tracking import with_timing
from ..spectral.densities import density_for
from ..utils.grids import GeometricGrid, UniformGrid, parallel_map

logger = logging.getLogger(__name__)

KERNEL_COLUMNS = ["t", "phi"]
OPERATOR_COLUMNS = ["t", "K", "phi_beta1", "phi_beta2"]
SPECTRAL_COLUMNS = [
    "z",
    "density",
    "method",
    "terms_used",
    "cancellation_ratio",
    "pole_collision",
    "perturbed",
]


def error_result(error: ZastavnyiError) -> Dict[str, Any]:
    """Dictionary reported by a tool whose computation raised."""
    return {
        "error": str(error),
        "error_type": type(error).__name__,
        "exit_code": exit_code_for(error),
    }


def build_family(family: str, params: Dict[str, Any]) -> KernelFamily:
    """Family member from a name and a parameter dictionary (None values ignored)."""
    return family_from_name(family, **{k: v for k, v in params.items() if v is not None})


def _floats(values: np.ndarray) -> List[float]:
    return [float(v) for v in np.asarray(values, dtype=float)]


@with_timing
def evaluate_kernel(
    family: str,
    params: Dict[str, Any],
    beta: float = 1.0,
    grid_min: float = 0.0,
    grid_max: float = 1.0,
    grid_n: int = 512,
) -> Dict[str, Any]:
    """
    Evaluate a family member phi(t / beta) on a uniform distance grid.

    Args:
        family: "matern", "cauchy" or "wendland"
        params: Family parameters (nu; delta and lambda; kappa and mu)
        beta: Scale
        grid_min: First distance
        grid_max: Last distance
        grid_n: Number of distances

    Returns:
        Dictionary with the kernel description, grid, columns and (t, phi) rows
    """
    try:
        kernel = ScaledKernel(build_family(family, params), beta)
        grid = UniformGrid(grid_min, grid_max, grid_n)
        t = grid.points()
        values = _floats(kernel(t))
        return {
            "kernel": {"family": kernel.family.name, **kernel.family.params(), "beta": kernel.beta},
            "grid": grid.describe(),
            "columns": KERNEL_COLUMNS,
            "rows": [{"t": float(x), "phi": v} for x, v in zip(t, values)],
        }
    except ZastavnyiError as e:
        return error_result(e)


@with_timing
def evaluate_operator(
    family: str,
    params: Dict[str, Any],
    eps: float,
    beta1: float,
    beta2: float,
    grid_min: float = 0.0,
    grid_max: float = 1.0,
    grid_n: int = 512,
) -> Dict[str, Any]:
    """
    Evaluate the Zastavnyi operator next to the two rescaled members it mixes.

    Args:
        family: Family name
        params: Family parameters
        eps: Operator exponent, non-zero
        beta1: Smaller scale
        beta2: Larger scale
        grid_min: First distance
        grid_max: Last distance
        grid_n: Number of distances

    Returns:
        Dictionary with the operator description and (t, K, phi_beta1,
        phi_beta2) rows
    """
    try:
        spec = ZastavnyiSpec(build_family(family, params), eps, beta1, beta2)
        grid = UniformGrid(grid_min, grid_max, grid_n)
        t = grid.points()
        combined = _floats(spec(t))
        low = _floats(ScaledKernel(spec.family, beta1)(t))
        high = _floats(ScaledKernel(spec.family, beta2)(t))
        rows = [
            {"t": float(x), "K": k, "phi_beta1": a, "phi_beta2": b}
            for x, k, a, b in zip(t, combined, low, high)
        ]
        return {
            "operator": spec.describe(),
            "grid": grid.describe(),
            "columns": OPERATOR_COLUMNS,
            "rows": rows,
            "minimum": min(combined),
            "argmin": float(t[int(np.argmin(combined))]),
        }
    except ZastavnyiError as e:
        return error_result(e)


@with_timing
def spectral_density(
    family: str,
    params: Dict[str, Any],
    d: int,
    eps: Optional[float] = None,
    beta: float = 1.0,
    beta1: Optional[float] = None,
    beta2: Optional[float] = None,
    grid_min: float = 1e-3,
    grid_max: float = 1e3,
    grid_n: int = 400,
) -> Dict[str, Any]:
    """
    Evaluate the d-dimensional spectral density on a geometric frequency grid.

    Without eps the density of phi(t / beta) is evaluated; with eps the
    density of the operator with scales beta1 < beta2.

    Args:
        family: Family name
        params: Family parameters
        d: Dimension
        eps: Operator exponent, or None for the family member alone
        beta: Scale of the family member
        beta1: Smaller operator scale
        beta2: Larger operator scale
        grid_min: First frequency, > 0
        grid_max: Last frequency
        grid_n: Number of frequencies

    Returns:
        Dictionary with the density description and (z, density, method,
        diagnostics) rows
    """
    try:
        member = build_family(family, params)
        if eps is None:
            density = density_for(member, d, beta)
        elif beta1 is None or beta2 is None:
            raise ValidationError("An operator density needs both beta1 and beta2")
        else:
            density = density_for(ZastavnyiSpec(member, eps, beta1, beta2), d)
        grid = GeometricGrid(grid_min, grid_max, grid_n)
        z = grid.points().tolist()
        evaluated = parallel_map(density.evaluate, z)

        rows = []
        for frequency, (value, diagnostics) in zip(z, evaluated):
            row = {"z": frequency, "density": float(value), "method": density.method.value}
            if diagnostics is not None:
                row.update(
                    {
                        "method": diagnostics.method.value,
                        "terms_used": diagnostics.terms_used,
                        "cancellation_ratio": diagnostics.cancellation_ratio,
                        "pole_collision": diagnostics.pole_collision_detected,
                        "perturbed": diagnostics.perturbed,
                    }
                )
            rows.append(row)
        return {
            "density": density.describe(),
            "grid": grid.describe(),
            "columns": SPECTRAL_COLUMNS,
            "rows": rows,
        }
    except ZastavnyiError as e:
        return error_result(e)
