"""Special functions used by the kernel, spectral and verification modules.

Thin, validated wrappers around ``scipy.special``: every function accepts a
scalar or an array, rejects non-finite input, raises on poles and overflow,
and never hands NaN back to the caller. Scalars in give floats out.
"""

import logging
import math
from typing import Union

import numpy as np
from scipy import special

from ..errors import DomainError, OverflowRangeError, PoleError, UnderflowError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _finite(name: str, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite, got {x!r}")
    return arr


def _out(arr: np.ndarray) -> ArrayLike:
    return float(arr) if np.ndim(arr) == 0 else arr


def _check_poles(x: np.ndarray) -> None:
    if np.any((x <= 0) & (x == np.floor(x))):
        raise PoleError(f"Gamma has a pole at non-positive integers, got {x!r}")


def gamma(x: ArrayLike) -> ArrayLike:
    """
    Gamma function.

    Args:
        x: Argument, not a non-positive integer

    Returns:
        Gamma(x)

    Raises:
        PoleError: x is 0, -1, -2, ...
        OverflowRangeError: result exceeds double range (x > ~171.6)
    """
    arr = _finite("x", x)
    _check_poles(arr)
    value = special.gamma(arr)
    if not np.all(np.isfinite(value)):
        raise OverflowRangeError(f"Gamma overflows at x={x!r}; use log_gamma")
    return _out(value)


def log_gamma(x: ArrayLike) -> ArrayLike:
    """Logarithm of |Gamma(x)|; pair with gamma_sign for negative x."""
    arr = _finite("x", x)
    _check_poles(arr)
    return _out(special.gammaln(arr))


def gamma_sign(x: ArrayLike) -> ArrayLike:
    """Sign of Gamma(x)."""
    arr = _finite("x", x)
    _check_poles(arr)
    return _out(special.gammasgn(arr))


def log_beta(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """Logarithm of the Beta function for positive arguments."""
    a_arr = _finite("a", a)
    b_arr = _finite("b", b)
    if np.any(a_arr <= 0) or np.any(b_arr <= 0):
        raise DomainError(f"Beta requires a > 0 and b > 0, got a={a!r}, b={b!r}")
    return _out(special.betaln(a_arr, b_arr))


def beta(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    """
    Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b), computed through
    log-gamma so that large arguments do not overflow intermediate values.
    """
    value = np.exp(np.asarray(log_beta(a, b)))
    if not np.all(np.isfinite(value)):
        raise OverflowRangeError(f"Beta overflows at a={a!r}, b={b!r}; use log_beta")
    return _out(value)


def bessel_k(nu: ArrayLike, z: ArrayLike, on_underflow: str = "zero") -> ArrayLike:
    """
    Modified Bessel function of the second kind K_nu(z).

    The order enters through |nu| so K_nu = K_{-nu} holds exactly.

    Args:
        nu: Real order
        z: Positive argument
        on_underflow: "zero" returns 0.0 (logged), "raise" raises UnderflowError

    Returns:
        K_nu(z)
    """
    order = np.abs(_finite("nu", nu))
    arg = _finite("z", z)
    if np.any(arg <= 0):
        raise DomainError(f"K_nu requires z > 0, got z={z!r}")
    value = special.kv(order, arg)
    if np.any(np.isinf(value)):
        raise OverflowRangeError(f"K_nu overflows at nu={nu!r}, z={z!r}")
    if np.any(value == 0.0):
        if on_underflow == "raise":
            raise UnderflowError(f"K_nu underflows to zero at nu={nu!r}, z={z!r}")
        logger.warning(f"K_nu underflow to zero at nu={nu!r}, z={z!r}")
    return _out(value)


def bessel_k_scaled(nu: ArrayLike, z: ArrayLike) -> ArrayLike:
    """Exponentially scaled K_nu(z) * exp(z); finite where K_nu underflows."""
    order = np.abs(_finite("nu", nu))
    arg = _finite("z", z)
    if np.any(arg <= 0):
        raise DomainError(f"K_nu requires z > 0, got z={z!r}")
    value = special.kve(order, arg)
    if np.any(np.isinf(value)):
        raise OverflowRangeError(f"Scaled K_nu overflows at nu={nu!r}, z={z!r}")
    return _out(value)


def bessel_k_prime(nu: ArrayLike, z: ArrayLike) -> ArrayLike:
    """Derivative dK_nu/dz = -(K_{nu-1}(z) + K_{nu+1}(z)) / 2."""
    order = _finite("nu", nu)
    lower = np.asarray(bessel_k(order - 1.0, z))
    upper = np.asarray(bessel_k(order + 1.0, z))
    return _out(-0.5 * (lower + upper))


def bessel_j(nu: ArrayLike, z: ArrayLike) -> ArrayLike:
    """
    Bessel function of the first kind J_nu(z) for nu >= -1/2 and z >= 0.

    Half-integer orders go through trigonometric closed forms
    (spherical Bessel functions); other orders through scipy's jv.
    """
    order = _finite("nu", nu)
    arg = _finite("z", z)
    if np.any(order < -0.5):
        raise DomainError(f"J_nu is only provided for nu >= -1/2, got nu={nu!r}")
    if np.any(arg < 0):
        raise DomainError(f"J_nu requires z >= 0, got z={z!r}")

    order, arg = np.broadcast_arrays(order, arg)
    value = np.empty(arg.shape, dtype=float)

    neg_half = order == -0.5
    if np.any(neg_half & (arg == 0)):
        raise DomainError("J_{-1/2} is unbounded at z = 0")
    if np.any(neg_half):
        x = arg[neg_half]
        value[neg_half] = np.sqrt(2.0 / (math.pi * x)) * np.cos(x)

    twice = 2.0 * order
    half_int = ~neg_half & (twice == np.floor(twice)) & (np.mod(twice, 2.0) == 1.0)
    if np.any(half_int):
        x = arg[half_int]
        n = (order[half_int] - 0.5).astype(int)
        value[half_int] = np.sqrt(2.0 * x / math.pi) * special.spherical_jn(n, x)

    rest = ~neg_half & ~half_int
    if np.any(rest):
        value[rest] = special.jv(order[rest], arg[rest])
    return _out(value)


def omega_d(d: int, t: ArrayLike) -> ArrayLike:
    """
    Schoenberg kernel Omega_d(t) = t^{-(d-2)/2} J_{(d-2)/2}(t).

    The value at t = 0 is the analytic limit 1 / (2^{(d-2)/2} Gamma(d/2)).
    """
    if int(d) != d or d < 1:
        raise DomainError(f"Dimension must be a positive integer, got d={d!r}")
    arg = _finite("t", t)
    if np.any(arg < 0):
        raise DomainError(f"Omega_d requires t >= 0, got t={t!r}")
    nu = (d - 2) / 2.0
    value = np.empty(arg.shape, dtype=float)
    at_zero = arg == 0
    value[at_zero] = 1.0 / (2.0 ** nu * math.gamma(d / 2.0))
    if np.any(~at_zero):
        x = arg[~at_zero]
        value[~at_zero] = x ** (-nu) * np.asarray(bessel_j(nu, x))
    return _out(value)
