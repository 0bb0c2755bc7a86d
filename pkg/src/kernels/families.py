"""Parametric families of radial positive-definite functions."""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import ClassVar, Dict, Union

import numpy as np
from scipy import integrate, special

from ..config import config
from ..errors import DomainError, QuadratureError, ValidationError
from ..numerics.quadrature import gauss_jacobi
from ..numerics.specfun import ArrayLike, log_beta, log_gamma

logger = logging.getLogger(__name__)

# Distances per Gauss-Jacobi batch; bounds the (points x nodes) work array
_CHUNK = 1024


def _distances(t: ArrayLike) -> np.ndarray:
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"Distances must be finite, got {t!r}")
    if np.any(arr < 0):
        raise DomainError(f"Distances must be non-negative, got {t!r}")
    return arr


def _out(arr: np.ndarray) -> ArrayLike:
    return float(arr) if np.ndim(arr) == 0 else arr


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive and finite, got {value!r}")
    return value


def matern(t: ArrayLike, nu: float) -> ArrayLike:
    """
    Matern correlation 2^{1-nu}/Gamma(nu) t^nu K_nu(t).

    Args:
        t: Distance(s), t >= 0
        nu: Smoothness, nu > 0

    Returns:
        Correlation value(s) in (0, 1]; exactly 1 at t = 0
    """
    nu = _positive("nu", nu)
    arr = _distances(t)
    value = np.ones(arr.shape, dtype=float)
    inside = arr > 0
    if np.any(inside):
        x = arr[inside]
        with np.errstate(over="ignore", divide="ignore"):
            scaled = special.kve(nu, x)
            log_value = (1.0 - nu) * math.log(2.0) - log_gamma(nu) + nu * np.log(x) + np.log(scaled) - x
        # kve overflows only for t so small that the value is 1 to double precision
        value[inside] = np.where(np.isfinite(log_value), np.exp(np.minimum(log_value, 0.0)), 1.0)
    return _out(value)


def gen_cauchy(t: ArrayLike, delta: float, lam: float) -> ArrayLike:
    """Generalized Cauchy correlation (1 + t^delta)^{-lam/delta}."""
    if not (0 < delta <= 2):
        raise ValidationError(f"delta must lie in (0, 2], got {delta!r}")
    lam = _positive("lambda", lam)
    arr = _distances(t)
    return _out(np.exp(-(lam / delta) * np.log1p(arr ** delta)))


def _wendland_gauss_jacobi(t: np.ndarray, kappa: float, mu: float, n: int) -> np.ndarray:
    # u = t + (1 - t)(1 + x)/2 maps [-1, 1] onto [t, 1]; the factors
    # (u - t)^{kappa-1} and (1 - u)^mu are carried by the Jacobi weight.
    nodes, weights = gauss_jacobi(n, mu, kappa - 1.0)
    tt = t[:, None]
    u = tt + (1.0 - tt) * (1.0 + nodes[None, :]) / 2.0
    smooth = u * (u + tt) ** (kappa - 1.0)
    scale = np.exp((kappa + mu) * np.log((1.0 - t) / 2.0) - log_beta(2.0 * kappa, mu + 1.0))
    return scale * (smooth @ weights)


def _wendland_qaws(t: float, kappa: float, mu: float) -> float:
    value, _ = integrate.quad(
        lambda u: u * (u + t) ** (kappa - 1.0),
        t,
        1.0,
        weight="alg",
        wvar=(kappa - 1.0, mu),
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    return value / math.exp(log_beta(2.0 * kappa, mu + 1.0))


def gen_wendland(t: ArrayLike, kappa: float, mu: float) -> ArrayLike:
    """
    Generalized Wendland correlation.

    For kappa = 0 this is the truncated power (1 - t)^mu_+. For kappa > 0 it is
    int_t^1 u (u^2 - t^2)^{kappa-1} (1 - u)^mu du / B(2 kappa, mu + 1), computed
    by Gauss-Jacobi quadrature with node doubling; adaptive algebraic-weight
    quadrature takes over when doubling stalls.

    Args:
        t: Distance(s), t >= 0
        kappa: Smoothness, kappa >= 0
        mu: Shape, mu > 0

    Returns:
        Correlation value(s) in [0, 1]; zero for t >= 1
    """
    if not (math.isfinite(kappa) and kappa >= 0):
        raise ValidationError(f"kappa must be non-negative, got {kappa!r}")
    mu = _positive("mu", mu)
    arr = _distances(t)
    value = np.zeros(arr.shape, dtype=float)

    inside = arr < 1.0
    if kappa == 0:
        value[inside] = (1.0 - arr[inside]) ** mu
        return _out(value)

    value[arr == 0] = 1.0
    todo = inside & (arr > 0)
    if not np.any(todo):
        return _out(value)

    x = arr[todo]
    value[todo] = np.concatenate(
        [_wendland_inside(x[i:i + _CHUNK], kappa, mu) for i in range(0, x.size, _CHUNK)]
    )
    return _out(value)


def _wendland_inside(x: np.ndarray, kappa: float, mu: float) -> np.ndarray:
    result = np.full(x.shape, np.nan)
    pending = np.ones(x.shape, dtype=bool)
    n = config.gw_nodes
    previous = _wendland_gauss_jacobi(x, kappa, mu, n)
    while n < config.gw_max_nodes and np.any(pending):
        n *= 2
        current = _wendland_gauss_jacobi(x[pending], kappa, mu, n)
        settled = np.abs(current - previous) <= config.gw_rtol * np.maximum(np.abs(current), 1e-300)
        index = np.flatnonzero(pending)
        result[index[settled]] = current[settled]
        pending[index[settled]] = False
        previous = current[~settled]
    logger.debug(f"Wendland quadrature stopped at {n} nodes, {int(pending.sum())} points unsettled")

    if np.any(pending):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                result[pending] = [_wendland_qaws(float(s), kappa, mu) for s in x[pending]]
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"Wendland quadrature failed: {exc}", partial_estimate=float(previous[0]))
    return result


@dataclass(frozen=True)
class Matern:
    """Matern family member with smoothness nu."""

    nu: float
    name: ClassVar[str] = "matern"
    support: ClassVar[float] = math.inf

    def __post_init__(self):
        _positive("nu", self.nu)

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return matern(t, self.nu)

    def params(self) -> Dict[str, float]:
        return {"nu": self.nu}


@dataclass(frozen=True)
class GeneralizedCauchy:
    """Generalized Cauchy family member with shape delta and decay lam."""

    delta: float
    lam: float
    name: ClassVar[str] = "cauchy"
    support: ClassVar[float] = math.inf

    def __post_init__(self):
        if not (0 < self.delta <= 2):
            raise ValidationError(f"delta must lie in (0, 2], got {self.delta!r}")
        _positive("lambda", self.lam)

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return gen_cauchy(t, self.delta, self.lam)

    def params(self) -> Dict[str, float]:
        return {"delta": self.delta, "lambda": self.lam}


@dataclass(frozen=True)
class GeneralizedWendland:
    """Generalized Wendland family member, supported on [0, 1]."""

    kappa: float
    mu: float
    name: ClassVar[str] = "wendland"
    support: ClassVar[float] = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and self.kappa >= 0):
            raise ValidationError(f"kappa must be non-negative, got {self.kappa!r}")
        _positive("mu", self.mu)

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return gen_wendland(t, self.kappa, self.mu)

    def params(self) -> Dict[str, float]:
        return {"kappa": self.kappa, "mu": self.mu}


KernelFamily = Union[Matern, GeneralizedCauchy, GeneralizedWendland]


@dataclass(frozen=True)
class ScaledKernel:
    """A family member rescaled to phi(t / beta)."""

    family: KernelFamily
    beta: float

    def __post_init__(self):
        _positive("beta", self.beta)

    @property
    def support(self) -> float:
        return self.family.support * self.beta

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return eval_scaled(self, t)


def eval_scaled(kernel: ScaledKernel, t: ArrayLike) -> ArrayLike:
    """Evaluate phi(t / beta) for a scaled kernel."""
    arr = _distances(t)
    return kernel.family(arr / kernel.beta)


_FAMILY_ALIASES = {
    "matern": "matern",
    "cauchy": "cauchy",
    "gen_cauchy": "cauchy",
    "wendland": "wendland",
    "gen_wendland": "wendland",
    "gw": "wendland",
}


def family_from_name(name: str, **params: float) -> KernelFamily:
    """
    Build a family member from its name and parameters.

    Args:
        name: "matern", "cauchy" or "wendland" (aliases gen_cauchy, gen_wendland, gw)
        **params: nu for Matern; delta and lam (or lambda) for Cauchy;
            kappa and mu for Wendland

    Returns:
        Validated family member
    """
    key = _FAMILY_ALIASES.get(name.lower())
    if key is None:
        raise ValidationError(f"Unknown kernel family '{name}'")

    def need(*names: str) -> float:
        for candidate in names:
            if params.get(candidate) is not None:
                return float(params[candidate])
        raise ValidationError(f"Family '{key}' requires parameter '{names[0]}'")

    if key == "matern":
        return Matern(nu=need("nu"))
    if key == "cauchy":
        return GeneralizedCauchy(delta=need("delta"), lam=need("lam", "lambda"))
    return GeneralizedWendland(kappa=need("kappa"), mu=need("mu"))
