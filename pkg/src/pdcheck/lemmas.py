"""Verifiers for the Bessel-ratio bounds and the monotonicity equivalences
used for the delta = 2 Cauchy operator."""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..errors import HypothesisViolationError, ValidationError
from ..numerics.specfun import bessel_k_scaled
from ..utils.grids import GeometricGrid
from .verdicts import SCHEMA_VERSION

logger = logging.getLogger(__name__)

DEFAULT_LEMMA1_GRID = GeometricGrid(1e-3, 50.0, 100)
DEFAULT_LEMMA2_GRID = GeometricGrid(0.01, 20.0, 200)
SMALL_Z = 1e-4
LARGE_Z = 1e3
LIMIT_TOLERANCE = 1e-3
DERIVATIVE_TOLERANCE = 1e-6


def shifted_log_derivative(nu: float, z: np.ndarray) -> np.ndarray:
    """
    z K_nu'(z) / K_nu(z) + nu = -z K_{nu-1}(z) / K_nu(z).

    The shift removes the cancellation against -nu for small z.
    """
    z = np.asarray(z, dtype=float)
    return -z * np.asarray(bessel_k_scaled(nu - 1.0, z)) / np.asarray(bessel_k_scaled(nu, z))


@dataclass(frozen=True)
class Lemma1Report:
    """Outcome of the Bessel-ratio bound check."""

    nu: float
    grid: Dict[str, Any]
    upper_holds: bool
    worst_upper_margin: float
    lower_checked: bool
    lower_holds: Optional[bool]
    worst_lower_margin: Optional[float]
    large_z_slope: float
    large_z_ok: bool
    small_z_ratio: Optional[float]
    small_z_ok: Optional[bool]

    @property
    def passed(self) -> bool:
        return (
            self.upper_holds
            and self.large_z_ok
            and self.lower_holds is not False
            and self.small_z_ok is not False
        )

    def to_record(self) -> Dict[str, Any]:
        return {"schema_version": SCHEMA_VERSION, "record": "lemma1", **asdict(self), "passed": self.passed}


def lemma1_bounds_check(nu: float, z_grid: Optional[GeometricGrid] = None) -> Lemma1Report:
    """
    Check -sqrt(nu z^2/(nu-1) + nu^2) < z K'/K < -sqrt(z^2 + nu^2) on a grid.

    Both sides are compared after adding nu, where they read
    -(nu/(nu-1)) z^2 / (nu + sqrt(nu z^2/(nu-1) + nu^2)) and
    -z^2 / (nu + sqrt(z^2 + nu^2)). The lower bound and the small-z limit
    -nu are only checked for nu > 1. The divergence at infinity is checked as
    the slope ratio/z -> -1 at z = 1e3.

    Args:
        nu: Order, nu > 0
        z_grid: Grid (default 100 points on [1e-3, 50])

    Returns:
        Lemma1Report
    """
    if not (math.isfinite(nu) and nu > 0):
        raise ValidationError(f"nu must be positive, got {nu!r}")
    grid = z_grid or DEFAULT_LEMMA1_GRID
    z = grid.points()
    shifted = shifted_log_derivative(nu, z)

    upper = -z ** 2 / (nu + np.sqrt(z ** 2 + nu ** 2))
    upper_margin = upper - shifted
    upper_holds = bool(np.all(upper_margin > 0))

    lower_checked = nu > 1
    lower_holds = worst_lower = small_ratio = small_ok = None
    if lower_checked:
        c = nu / (nu - 1.0)
        lower = -c * z ** 2 / (nu + np.sqrt(c * z ** 2 + nu ** 2))
        lower_margin = shifted - lower
        lower_holds = bool(np.all(lower_margin > 0))
        worst_lower = float(np.min(lower_margin / np.abs(lower)))
        small_ratio = float(shifted_log_derivative(nu, np.array([SMALL_Z]))[0]) - nu
        small_ok = abs(small_ratio + nu) <= LIMIT_TOLERANCE

    large_ratio = float(shifted_log_derivative(nu, np.array([LARGE_Z]))[0]) - nu
    slope = large_ratio / LARGE_Z
    report = Lemma1Report(
        nu=nu,
        grid=grid.describe(),
        upper_holds=upper_holds,
        worst_upper_margin=float(np.min(upper_margin / np.abs(upper))),
        lower_checked=lower_checked,
        lower_holds=lower_holds,
        worst_lower_margin=worst_lower,
        large_z_slope=slope,
        large_z_ok=abs(slope + 1.0) <= LIMIT_TOLERANCE,
        small_z_ratio=small_ratio,
        small_z_ok=small_ok,
    )
    logger.info(f"Bessel ratio bounds for nu={nu}: passed={report.passed}")
    return report


@dataclass(frozen=True)
class Lemma2Report:
    """Outcome of the monotonicity check of beta^a K_nu(beta)."""

    eps: float
    lam: float
    d: int
    exponent: float
    order: float
    grid: Dict[str, Any]
    decreasing: bool
    max_log_increment: float
    sign_condition_holds: bool
    max_sign_value: float
    derivative_max_rel_error: float
    derivative_ok: bool

    @property
    def passed(self) -> bool:
        return self.decreasing and self.sign_condition_holds and self.derivative_ok

    def to_record(self) -> Dict[str, Any]:
        return {"schema_version": SCHEMA_VERSION, "record": "lemma2", **asdict(self), "passed": self.passed}


def _log_g(a: float, nu: float, beta: np.ndarray) -> np.ndarray:
    return a * np.log(beta) + np.log(np.asarray(bessel_k_scaled(nu, beta))) - beta


def lemma2_monotonicity_check(
    eps: float, lam: float, d: int, beta_grid: Optional[GeometricGrid] = None
) -> Lemma2Report:
    """
    Check that g(beta) = beta^{eps + (2d+lam)/4} K_{(2d-lam)/4}(beta) is
    strictly decreasing, that (eps + (2d+lam)/4) + beta K'/K < 0, and that a
    central difference of g matches its analytic derivative.

    Args:
        eps: Operator exponent
        lam: Cauchy decay parameter
        d: Dimension
        beta_grid: Grid (default 200 points on [0.01, 20])

    Returns:
        Lemma2Report

    Raises:
        HypothesisViolationError: unless d > lam/2 + 2 and 2 eps < -lam
    """
    if not (d > lam / 2.0 + 2 and 2 * eps < -lam):
        raise HypothesisViolationError(
            f"Monotonicity check needs d > lambda/2 + 2 and 2 eps < -lambda, got eps={eps}, lambda={lam}, d={d}"
        )
    grid = beta_grid or DEFAULT_LEMMA2_GRID
    beta = grid.points()
    a = eps + (2 * d + lam) / 4.0
    nu = (2 * d - lam) / 4.0

    log_g = _log_g(a, nu, beta)
    increments = np.diff(log_g)

    # a + beta K'/K = (a - nu) + beta K'/K + nu
    sign_values = (a - nu) + shifted_log_derivative(nu, beta)

    h = 1e-6 * np.maximum(1.0, beta)
    g = np.exp(log_g)
    numeric = (np.exp(_log_g(a, nu, beta + h)) - np.exp(_log_g(a, nu, beta - h))) / (2.0 * h)
    analytic = g * sign_values / beta
    rel_error = np.abs(numeric - analytic) / np.abs(analytic)

    report = Lemma2Report(
        eps=eps,
        lam=lam,
        d=int(d),
        exponent=a,
        order=nu,
        grid=grid.describe(),
        decreasing=bool(np.all(increments < 0)),
        max_log_increment=float(np.max(increments)),
        sign_condition_holds=bool(np.all(sign_values < 0)),
        max_sign_value=float(np.max(sign_values)),
        derivative_max_rel_error=float(np.max(rel_error)),
        derivative_ok=bool(np.max(rel_error) <= DERIVATIVE_TOLERANCE),
    )
    logger.info(f"Monotonicity check eps={eps} lambda={lam} d={d}: passed={report.passed}")
    return report
