"""Numerical radial Fourier (Hankel) transform.

The d-dimensional transform of a radial function is

    phi_hat_d(z) = z^{1-d/2} (2 pi)^{-d/2} int_0^inf t^{d/2} J_{d/2-1}(t z) phi(t) dt,

the convention under which phi_hat_d integrates back to phi(0) = 1. In the
variable x = t z the integral runs between fixed zeros of J_{d/2-1}, so the
panels do not depend on z.
"""

import logging
import math
import warnings
from typing import Callable, List, Optional

from scipy import integrate

from ..config import config
from ..errors import DomainError, QuadratureError
from ..middleware.tracking import get_tracker
from ..numerics.quadrature import bessel_j_zeros, euler_accelerate
from ..numerics.specfun import bessel_j

logger = logging.getLogger(__name__)

# Panels before the accelerated estimate is trusted
_MIN_PANELS = 8
# Consecutive agreeing estimates required
_AGREEMENTS = 3
# Partial sums fed to the Euler transformation
_EULER_DEPTH = 12
# Beyond t = 10 every kernel is in its monotone tail; panel growth there is
# a power law the Euler transformation handles
_TAIL_START = 10.0


def _panel(f: Callable[[float], float], a: float, b: float, scale: float) -> float:
    # Break points where phi(x/z) changes on its own length scale
    points = [p for p in (0.1 * scale, scale, 10.0 * scale) if a < p < b]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(f, a, b, points=points or None, epsabs=0.0, epsrel=1e-13, limit=200)
    return value


def _zero_count(needed: int) -> int:
    count = 64
    while count < needed:
        count *= 2
    return count


def hankel_numeric(
    phi: Callable,
    d: int,
    z: float,
    support: float = math.inf,
    rtol: Optional[float] = None,
    max_panels: Optional[int] = None,
) -> float:
    """
    Radial Fourier transform of phi in dimension d at frequency z.

    Args:
        phi: Radial function of t >= 0 (scalar in, scalar out)
        d: Dimension, d >= 1
        z: Frequency, z > 0
        support: Radius beyond which phi vanishes (inf for full support)
        rtol: Relative tolerance (default from config)
        max_panels: Panel cap (default from config)

    Returns:
        The transform value

    Raises:
        QuadratureError: tolerance not reached within the panel cap
    """
    if int(d) != d or d < 1:
        raise DomainError(f"Dimension must be a positive integer, got d={d!r}")
    if not (math.isfinite(z) and z > 0):
        raise DomainError(f"Hankel transform needs z > 0, got z={z!r}")
    if not support > 0:
        raise DomainError(f"Support radius must be positive, got {support!r}")
    rtol = config.hankel_rtol if rtol is None else rtol
    max_panels = config.hankel_max_panels if max_panels is None else max_panels

    nu = d / 2.0 - 1.0
    half_d = d / 2.0
    prefactor = z ** (-d) * (2.0 * math.pi) ** (-half_d)

    def integrand(x: float) -> float:
        return x ** half_d * bessel_j(nu, x) * float(phi(x / z))

    if math.isfinite(support):
        limit = support * z
        edges = [0.0]
        needed = int(limit / math.pi) + d + 2
        if needed > max_panels:
            raise QuadratureError(f"Compact-support transform at z={z} needs more than {max_panels} panels")
        zeros = bessel_j_zeros(nu, _zero_count(needed))
        edges.extend(float(x) for x in zeros[zeros < limit])
        edges.append(limit)
        panels = [_panel(integrand, a, b, z) for a, b in zip(edges[:-1], edges[1:])]
        get_tracker().track_hankel(len(panels))
        return prefactor * math.fsum(panels)

    partial_sums: List[float] = []
    panels: List[float] = []
    estimates: List[float] = []
    running = 0.0
    peak = 0.0
    agreements = 0
    count = 64
    zeros = bessel_j_zeros(nu, count)
    left = 0.0

    for k in range(max_panels):
        if k >= count:
            count = min(2 * count, _zero_count(max_panels))
            zeros = bessel_j_zeros(nu, count)
        right = float(zeros[k])
        panels.append(_panel(integrand, left, right, z))
        left = right
        running = math.fsum(panels)
        partial_sums.append(running)
        peak = max(peak, abs(running))

        if k + 1 < _MIN_PANELS:
            continue
        estimates.append(euler_accelerate(partial_sums, _EULER_DEPTH))
        if len(estimates) < 2:
            continue
        current, before = estimates[-1], estimates[-2]
        floor = max(abs(current), 1e-6 * peak)
        settled = abs(panels[-1]) <= abs(panels[-2]) or left >= _TAIL_START * z
        if abs(current - before) <= rtol * floor and settled:
            agreements += 1
        else:
            agreements = 0
        if agreements >= _AGREEMENTS:
            get_tracker().track_hankel(k + 1)
            logger.debug(f"Hankel transform d={d} z={z} converged after {k + 1} panels")
            return prefactor * current

    partial = prefactor * estimates[-1] if estimates else prefactor * running
    get_tracker().track_hankel(max_panels)
    raise QuadratureError(
        f"Hankel transform d={d} z={z} did not converge within {max_panels} panels",
        partial_estimate=partial,
    )


def hankel_origin(phi: Callable, d: int, support: float = math.inf) -> float:
    """
    Transform at z = 0: (2 pi)^{-d} |S^{d-1}| int_0^inf t^{d-1} phi(t) dt.

    Raises:
        QuadratureError: the radial integral does not converge
    """
    if int(d) != d or d < 1:
        raise DomainError(f"Dimension must be a positive integer, got d={d!r}")
    sphere = 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(
                lambda t: t ** (d - 1) * float(phi(t)), 0.0, support, epsabs=0.0, epsrel=1e-12, limit=200
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"Radial integral at z=0 did not converge: {exc}")
    return (2.0 * math.pi) ** (-d) * sphere * value
