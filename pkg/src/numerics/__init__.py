"""Special functions and quadrature building blocks."""

from .specfun import (
    beta,
    bessel_j,
    bessel_k,
    bessel_k_prime,
    bessel_k_scaled,
    gamma,
    gamma_sign,
    log_beta,
    log_gamma,
    omega_d,
)
from .quadrature import bessel_j_zeros, euler_accelerate, gauss_jacobi

__all__ = [
    "beta",
    "bessel_j",
    "bessel_j_zeros",
    "bessel_k",
    "bessel_k_prime",
    "bessel_k_scaled",
    "euler_accelerate",
    "gamma",
    "gamma_sign",
    "gauss_jacobi",
    "log_beta",
    "log_gamma",
    "omega_d",
]
