"""Quadrature rules, Bessel zeros and series acceleration."""

import logging
import math
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from scipy import optimize, special

from ..errors import DomainError
from .specfun import bessel_j

logger = logging.getLogger(__name__)

# Scan step for bracketing zeros; consecutive zeros of J_nu (nu >= -1/2) are
# more than 2 apart, so one sign change per step at most.
_ZERO_SCAN_STEP = 0.25


@lru_cache(maxsize=64)
def gauss_jacobi(n: int, alpha: float, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Jacobi nodes and weights on [-1, 1] for weight (1-x)^alpha (1+x)^beta.

    Args:
        n: Number of nodes
        alpha: Exponent at x = 1, > -1
        beta: Exponent at x = -1, > -1

    Returns:
        Read-only (nodes, weights) arrays
    """
    if n < 1:
        raise DomainError(f"Gauss-Jacobi needs at least one node, got n={n}")
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi exponents must exceed -1, got alpha={alpha}, beta={beta}")
    nodes, weights = special.roots_jacobi(n, alpha, beta)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _exact_zeros(nu: float, count: int):
    k = np.arange(1, count + 1, dtype=float)
    if nu == -0.5:
        return (k - 0.5) * math.pi
    if nu == 0.5:
        return k * math.pi
    if nu >= 0 and nu == int(nu):
        return special.jn_zeros(int(nu), count)
    return None


@lru_cache(maxsize=32)
def bessel_j_zeros(nu: float, count: int) -> np.ndarray:
    """
    First ``count`` positive zeros of J_nu, nu >= -1/2.

    Orders -1/2 and 1/2 and non-negative integers use exact or library zeros;
    any other order brackets sign changes on a scan grid and refines them with
    Brent's method.
    """
    if nu < -0.5:
        raise DomainError(f"Zeros are only provided for nu >= -1/2, got nu={nu}")
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")

    exact = _exact_zeros(nu, count)
    if exact is not None:
        exact.setflags(write=False)
        return exact

    # McMahon: j_{nu,k} ~ (k + nu/2 - 1/4) pi, an upper estimate for nu > 1/2
    upper = (count + nu / 2.0 + 1.0) * math.pi + 2.0
    grid = np.arange(_ZERO_SCAN_STEP, upper, _ZERO_SCAN_STEP)
    values = special.jv(nu, grid)
    changes = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]

    zeros = np.array(
        [
            optimize.brentq(lambda x: bessel_j(nu, x), grid[i], grid[i + 1], xtol=1e-14, rtol=1e-15)
            for i in changes[:count]
        ]
    )
    if zeros.size < count:
        raise DomainError(f"Found only {zeros.size} of {count} zeros of J_{nu}")
    logger.debug(f"Computed {count} zeros of J_{nu} by bracketing")
    zeros.setflags(write=False)
    return zeros


def euler_accelerate(partial_sums: Sequence[float], depth: int = 12) -> float:
    """
    Euler transformation of an alternating series by repeated averaging of
    its last ``depth`` partial sums.
    """
    sums = np.asarray(partial_sums, dtype=float)[-depth:]
    if sums.size == 0:
        raise DomainError("No partial sums to accelerate")
    while sums.size > 1:
        sums = 0.5 * (sums[:-1] + sums[1:])
    return float(sums[0])
