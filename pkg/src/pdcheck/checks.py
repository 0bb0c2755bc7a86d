"""Numerical positive-definiteness checks.

Each check returns a PDVerdict. Evaluation failures propagate as exceptions;
a verdict is only issued from values that were all computed successfully.
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
from scipy import linalg
from scipy.spatial.distance import pdist, squareform

from ..config import config
from ..errors import EigenSolverError, ValidationError
from ..middleware.tracking import get_tracker
from ..spectral.densities import DensitySource, density_for
from ..utils.grids import GeometricGrid
from .verdicts import CheckMethod, PDVerdict, classify

logger = logging.getLogger(__name__)

DEFAULT_Z_GRID = GeometricGrid(1e-3, 1e3, 400)
DEFAULT_T_GRID = GeometricGrid(1e-3, 1e2, 200)
SPECTRAL_RELATIVE_TOLERANCE = 1e-10
GRAM_TOLERANCE_PER_POINT = 1e-8
MONOTONICITY_TOLERANCE = 1e-12
MAX_GRAM_POINTS = 500
MAX_MONOTONICITY_ORDER = 10
# Points per decade when a spectral search is extended
_EXTENSION_POINTS = 40


def spectral_nonnegativity(
    source: DensitySource,
    d: int,
    z_grid: Optional[GeometricGrid] = None,
    relative_tolerance: float = SPECTRAL_RELATIVE_TOLERANCE,
    extend_to: Optional[float] = None,
) -> PDVerdict:
    """
    Check that the spectral density is nonnegative on a frequency grid.

    Args:
        source: Family member, scaled kernel or operator specification
        d: Dimension
        z_grid: Geometric frequency grid (default 400 points on [1e-3, 1e3])
        relative_tolerance: Tolerance as a fraction of the largest grid value
        extend_to: If set and no witness is found, keep searching decade by
            decade up to this frequency

    Returns:
        PDVerdict with the most negative frequency as witness
    """
    grid = z_grid or DEFAULT_Z_GRID
    density = density_for(source, d)
    z = grid.points()
    values = density.values(z)

    def verdict_inputs(z_all: np.ndarray, v_all: np.ndarray):
        tolerance = relative_tolerance * float(np.max(np.abs(v_all)))
        index = int(np.argmin(v_all))
        return tolerance, float(z_all[index]), float(v_all[index])

    tolerance, location, witness = verdict_inputs(z, values)
    stop = grid.stop
    if extend_to is not None:
        while witness >= -tolerance and stop < extend_to:
            upper = min(stop * 10.0, extend_to)
            extra = GeometricGrid(stop, upper, _EXTENSION_POINTS).points()[1:]
            logger.debug(f"Extending spectral search to z={upper}")
            z = np.concatenate([z, extra])
            values = np.concatenate([values, density.values(extra)])
            stop = upper
            tolerance, location, witness = verdict_inputs(z, values)

    verdict = classify(witness, tolerance)
    get_tracker().track_verdict(CheckMethod.SPECTRAL_GRID.value, verdict.value == "refuted")
    grid_spec = {**grid.describe(), "searched_to": stop}
    return PDVerdict(
        method=CheckMethod.SPECTRAL_GRID,
        verdict=verdict,
        witness_location=location,
        witness_value=witness,
        tolerance=tolerance,
        grid_spec=grid_spec,
        details={"density": density.describe()},
    )


def gram_min_eigenvalue(
    kernel: Callable,
    d: int,
    n_points: Optional[int] = None,
    seed: Optional[int] = None,
) -> PDVerdict:
    """
    Smallest eigenvalue of the kernel matrix on seeded uniform points in [0, 1]^d.

    Args:
        kernel: Radial function accepting an array of distances
        d: Dimension
        n_points: Number of points, at most 500 (default from config)
        seed: Generator seed (default from config)

    Returns:
        PDVerdict, consistent iff the smallest eigenvalue is >= -1e-8 n
    """
    n = config.gram_points if n_points is None else int(n_points)
    seed = config.seed if seed is None else int(seed)
    if not 1 <= n <= MAX_GRAM_POINTS:
        raise ValidationError(f"Gram check needs 1 <= n_points <= {MAX_GRAM_POINTS}, got {n}")
    if int(d) != d or d < 1:
        raise ValidationError(f"Dimension must be a positive integer, got d={d!r}")

    rng = np.random.default_rng(seed)
    points = rng.uniform(0.0, 1.0, size=(n, int(d)))
    diagonal = float(np.asarray(kernel(np.zeros(1)))[0])
    if n > 1:
        matrix = squareform(np.asarray(kernel(pdist(points)), dtype=float))
    else:
        matrix = np.zeros((1, 1))
    matrix[np.diag_indices(n)] = diagonal

    try:
        eigenvalues, eigenvectors = linalg.eigh(matrix, subset_by_index=[0, 0], driver="evx")
    except linalg.LinAlgError as exc:
        raise EigenSolverError(f"Symmetric eigen-solver failed for n={n}: {exc}")

    smallest = float(eigenvalues[0])
    location = int(np.argmax(np.abs(eigenvectors[:, 0])))
    tolerance = GRAM_TOLERANCE_PER_POINT * n
    verdict = classify(smallest, tolerance)
    get_tracker().track_verdict(CheckMethod.GRAM_EIGEN.value, verdict.value == "refuted")
    return PDVerdict(
        method=CheckMethod.GRAM_EIGEN,
        verdict=verdict,
        witness_location=location,
        witness_value=smallest,
        tolerance=tolerance,
        grid_spec={"kind": "uniform_random", "d": int(d), "n_points": n, "seed": seed},
    )


def complete_monotonicity_check(
    kernel: Callable,
    k_max: int = 8,
    t_grid: Optional[GeometricGrid] = None,
    tolerance: float = MONOTONICITY_TOLERANCE,
) -> PDVerdict:
    """
    Finite-order complete monotonicity test of psi(s) = phi(sqrt(s)).

    Checks (-1)^k Delta_h^k psi(s) >= -tol_k for k = 0..k_max with forward
    differences of step h = s/20 and tol_k = tolerance 2^k max|psi|. At
    k_max = 0 this is a plain nonnegativity check of phi.

    Args:
        kernel: Radial function accepting an array of distances
        k_max: Highest difference order, at most 10
        t_grid: Distances whose squares are the base points s
        tolerance: Relative tolerance

    Returns:
        PDVerdict with witness (k, s)
    """
    if not 0 <= k_max <= MAX_MONOTONICITY_ORDER:
        raise ValidationError(f"k_max must lie in [0, {MAX_MONOTONICITY_ORDER}], got {k_max}")
    grid = t_grid or DEFAULT_T_GRID
    s = grid.points() ** 2
    h = s / 20.0
    stencil = s[:, None] + np.arange(k_max + 1)[None, :] * h[:, None]
    psi = np.asarray(kernel(np.sqrt(stencil)), dtype=float).reshape(stencil.shape)
    scale = float(np.max(np.abs(psi)))

    worst_ratio = math.inf
    witness = (0, float(s[0]))
    witness_value = 0.0
    witness_tolerance = tolerance * scale
    for k in range(k_max + 1):
        signed = (-1.0) ** k * np.diff(psi, n=k, axis=1)[:, 0]
        tol_k = tolerance * 2.0 ** k * scale
        ratios = signed / tol_k
        index = int(np.argmin(ratios))
        if ratios[index] < worst_ratio:
            worst_ratio = float(ratios[index])
            witness = (k, float(s[index]))
            witness_value = float(signed[index])
            witness_tolerance = tol_k

    verdict = classify(witness_value, witness_tolerance)
    get_tracker().track_verdict(CheckMethod.COMPLETE_MONOTONICITY.value, verdict.value == "refuted")
    return PDVerdict(
        method=CheckMethod.COMPLETE_MONOTONICITY,
        verdict=verdict,
        witness_location=witness,
        witness_value=witness_value,
        tolerance=witness_tolerance,
        grid_spec={**grid.describe(), "k_max": k_max, "step": "s/20"},
    )
