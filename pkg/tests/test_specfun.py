#!/usr/bin/env python3
"""
Tests for the special functions and quadrature building blocks.
Reference values come from mpmath at 30 digits.
"""

import math
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import mpmath
import numpy as np

from helpers import check_rel, main_guard
from src.errors import DomainError, OverflowRangeError, PoleError, UnderflowError
from src.numerics import (
    beta,
    bessel_j,
    bessel_j_zeros,
    bessel_k,
    bessel_k_prime,
    bessel_k_scaled,
    euler_accelerate,
    gamma,
    gamma_sign,
    gauss_jacobi,
    log_beta,
    log_gamma,
    omega_d,
)

mpmath.mp.dps = 30


def _raises(exc_type, func, *args, **kwargs):
    try:
        func(*args, **kwargs)
    except exc_type:
        return
    raise AssertionError(f"{func.__name__}{args} did not raise {exc_type.__name__}")


def test_gamma_values_and_poles():
    assert gamma(5.0) == 24.0
    check_rel(gamma(0.5), math.sqrt(math.pi), 1e-14)
    check_rel(gamma(-1.5), float(mpmath.gamma(-1.5)), 1e-13)
    assert gamma_sign(-1.5) == 1.0
    assert gamma_sign(-0.5) == -1.0
    _raises(PoleError, gamma, 0.0)
    _raises(PoleError, gamma, -3.0)
    _raises(PoleError, log_gamma, -2.0)
    _raises(OverflowRangeError, gamma, 200.0)
    check_rel(log_gamma(200.0), float(mpmath.loggamma(200)), 1e-14)


def test_gamma_rejects_non_finite():
    _raises(DomainError, gamma, float("nan"))
    _raises(DomainError, bessel_k, 1.0, float("inf"))


def test_beta_matches_gamma_ratio():
    check_rel(beta(2.0, 5.0), 1.0 / 30.0, 1e-14)
    check_rel(log_beta(300.0, 400.0), float(mpmath.log(mpmath.beta(300, 400))), 1e-13)
    _raises(DomainError, beta, 0.0, 1.0)


def test_bessel_k_against_mpmath():
    for nu in (0.0, 0.5, 1.3, 2.5, 7.0):
        for z in (1e-3, 0.1, 1.0, 5.0, 40.0):
            check_rel(bessel_k(nu, z), float(mpmath.besselk(nu, z)), 1e-12, f"K_{nu}({z})")
            check_rel(bessel_k_scaled(nu, z), float(mpmath.besselk(nu, z) * mpmath.exp(z)), 1e-12)


def test_bessel_k_half_order_closed_form():
    z = np.linspace(0.1, 20.0, 50)
    expected = np.sqrt(math.pi / (2.0 * z)) * np.exp(-z)
    assert np.allclose(bessel_k(0.5, z), expected, rtol=1e-13, atol=0.0)


def test_bessel_k_is_even_in_order():
    assert bessel_k(-1.7, 2.3) == bessel_k(1.7, 2.3)


def test_bessel_k_domain_and_underflow():
    _raises(DomainError, bessel_k, 1.0, 0.0)
    _raises(DomainError, bessel_k, 1.0, -1.0)
    assert bessel_k(1.0, 1000.0) == 0.0
    _raises(UnderflowError, bessel_k, 1.0, 1000.0, on_underflow="raise")
    assert bessel_k_scaled(1.0, 1000.0) > 0.0


def test_bessel_k_prime_matches_mpmath_derivative():
    for nu, z in ((0.5, 1.0), (1.5, 0.3), (3.0, 4.0)):
        expected = float(mpmath.diff(lambda x: mpmath.besselk(nu, x), z))
        check_rel(bessel_k_prime(nu, z), expected, 1e-10)


def test_bessel_j_against_mpmath():
    for nu in (-0.5, 0.0, 0.5, 1.0, 1.3, 1.5, 2.5):
        for z in (0.5, 3.0, 7.2, 25.0):
            expected = float(mpmath.besselj(nu, z))
            assert abs(bessel_j(nu, z) - expected) <= 1e-13 * max(1.0, abs(expected)), (nu, z)


def test_bessel_j_domain():
    _raises(DomainError, bessel_j, -1.0, 1.0)
    _raises(DomainError, bessel_j, 0.5, -1.0)
    _raises(DomainError, bessel_j, -0.5, 0.0)
    assert bessel_j(0.0, 0.0) == 1.0


def test_omega_d_limits():
    # d = 1: Omega_1(t) = sqrt(2/pi) cos t; d = 3: sqrt(2/pi) sin t / t
    t = np.array([0.0, 0.5, 2.0])
    check_rel(float(omega_d(1, 0.0)), math.sqrt(2.0 / math.pi), 1e-14)
    assert np.allclose(omega_d(1, t[1:]), math.sqrt(2.0 / math.pi) * np.cos(t[1:]), rtol=1e-13)
    assert np.allclose(omega_d(3, t[1:]), math.sqrt(2.0 / math.pi) * np.sin(t[1:]) / t[1:], rtol=1e-13)
    check_rel(float(omega_d(2, 0.0)), 1.0, 1e-15)


def test_gauss_jacobi_integrates_polynomials_exactly():
    alpha, beta_exp = 4.5, -0.5
    nodes, weights = gauss_jacobi(10, alpha, beta_exp)
    expected = 2.0 ** (alpha + beta_exp + 1.0) * float(mpmath.beta(alpha + 1, beta_exp + 1))
    check_rel(float(np.sum(weights)), expected, 1e-13)
    # (1 + x)^3 raises the second exponent by 3
    shifted = 2.0 ** (alpha + beta_exp + 4.0) * float(mpmath.beta(alpha + 1, beta_exp + 4))
    check_rel(float(np.sum(weights * (1.0 + nodes) ** 3)), shifted, 1e-13)
    assert not nodes.flags.writeable


def test_bessel_j_zeros():
    assert np.allclose(bessel_j_zeros(0.5, 5), np.arange(1, 6) * math.pi, rtol=1e-15)
    assert np.allclose(bessel_j_zeros(-0.5, 3), (np.arange(1, 4) - 0.5) * math.pi, rtol=1e-15)
    for nu in (0.0, 1.5, 0.3):
        zeros = bessel_j_zeros(nu, 6)
        expected = [float(mpmath.besseljzero(nu, k)) for k in range(1, 7)]
        assert np.allclose(zeros, expected, rtol=1e-12), (nu, zeros, expected)
    _raises(DomainError, bessel_j_zeros, -0.75, 3)


def test_euler_accelerate_alternating_series():
    terms = [(-1.0) ** (k + 1) / k for k in range(1, 31)]
    partial = np.cumsum(terms)
    assert abs(partial[-1] - math.log(2.0)) > 1e-2
    assert abs(euler_accelerate(partial) - math.log(2.0)) < 1e-8
    _raises(DomainError, euler_accelerate, [])


if __name__ == "__main__":
    main_guard(globals(), "special functions")
