"""Spectral densities of the kernel families and of the operator.

All densities use the transform normalised so that the density integrates
back to phi(0) = 1, and the scaling identity phi_hat_{d,beta}(z) =
beta^d phi_hat_d(beta z).
"""

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from ..config import config
from ..errors import DomainError, PoleCollisionError, SeriesConvergenceError, UnboundedDensityError, ValidationError
from ..kernels.families import GeneralizedCauchy, GeneralizedWendland, KernelFamily, Matern, ScaledKernel
from ..kernels.operator import ZastavnyiSpec
from ..middleware.tracking import get_tracker
from ..numerics.specfun import ArrayLike, bessel_k_scaled, gamma_sign, log_gamma
from ..utils.grids import parallel_map
from .hankel import hankel_numeric, hankel_origin

logger = logging.getLogger(__name__)

# Exponent coincidence tolerance for lambda + n delta = d + 2m
_COLLISION_TOL = 1e-8
# Terms of the two series whose exponents are this close are summed together
_MERGE_TOL = 1e-4
# Relative perturbation of lambda when exponents collide
_PERTURBATION = 1e-6
_TRUNCATION = 1e-16
_SMALL_TERMS = 3
_LOG_MAX = 709.0


class SpectralMethod(str, Enum):
    """How a density value is computed."""

    CLOSED_FORM_MATERN = "ClosedFormMatern"
    CAUCHY_SERIES = "CauchySeries"
    CAUCHY_DELTA2 = "CauchyDelta2"
    NUMERIC_HANKEL = "NumericHankel"


@dataclass(frozen=True)
class SeriesDiagnostics:
    """
    Quality report of one Cauchy series evaluation.

    When the series is handed to quadrature before it is summed (beta*z
    above the series argument limit, or a term overflow) only its leading
    term is evaluated: terms_used is 1 and method records the Hankel path.
    """

    terms_used: int
    max_term_magnitude: float
    cancellation_ratio: float
    pole_collision_detected: bool = False
    perturbed: bool = False
    method: SpectralMethod = SpectralMethod.CAUCHY_SERIES

    def to_dict(self) -> Dict[str, Any]:
        record = asdict(self)
        record["method"] = self.method.value
        return record

    @staticmethod
    def merge(first: "SeriesDiagnostics", second: "SeriesDiagnostics") -> "SeriesDiagnostics":
        """Worst-case combination of two evaluations feeding one value."""
        delegated = SpectralMethod.NUMERIC_HANKEL in (first.method, second.method)
        return SeriesDiagnostics(
            terms_used=max(first.terms_used, second.terms_used),
            max_term_magnitude=max(first.max_term_magnitude, second.max_term_magnitude),
            cancellation_ratio=max(first.cancellation_ratio, second.cancellation_ratio),
            pole_collision_detected=first.pole_collision_detected or second.pole_collision_detected,
            perturbed=first.perturbed or second.perturbed,
            method=SpectralMethod.NUMERIC_HANKEL if delegated else first.method,
        )


def _check_common(beta: float, d: int) -> None:
    if not (math.isfinite(beta) and beta > 0):
        raise ValidationError(f"beta must be positive and finite, got {beta!r}")
    if int(d) != d or d < 1:
        raise ValidationError(f"Dimension must be a positive integer, got d={d!r}")


def _frequencies(z: ArrayLike) -> np.ndarray:
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError(f"Frequencies must be finite and non-negative, got {z!r}")
    return arr


def matern_spectral(z: ArrayLike, nu: float, beta: float, d: int) -> ArrayLike:
    """
    Matern density Gamma(nu + d/2) / (pi^{d/2} Gamma(nu)) beta^d (1 + beta^2 z^2)^{-nu-d/2}.

    Args:
        z: Frequency (or array), z >= 0
        nu: Smoothness, nu > 0
        beta: Scale, beta > 0
        d: Dimension

    Returns:
        Density value(s), strictly positive
    """
    Matern(nu)
    _check_common(beta, d)
    arr = _frequencies(z)
    log_value = (
        log_gamma(nu + d / 2.0)
        - (d / 2.0) * math.log(math.pi)
        - log_gamma(nu)
        + d * math.log(beta)
        - (nu + d / 2.0) * np.log1p((beta * arr) ** 2)
    )
    value = np.exp(log_value)
    return float(value) if np.ndim(value) == 0 else value


def cauchy_delta2_spectral(z: ArrayLike, lam: float, beta: float, d: int) -> ArrayLike:
    """
    Density of (1 + (t/beta)^2)^{-lam/2}:
    A beta^d (beta z)^{nu'} K_{nu'}(beta z), nu' = (lam - d)/2,
    A = 2^{1-lam/2} / ((2 pi)^{d/2} Gamma(lam/2)).

    At z = 0 the limit beta^d Gamma((lam-d)/2) / (2^d pi^{d/2} Gamma(lam/2))
    is returned when lam > d.

    Raises:
        UnboundedDensityError: z = 0 with lam <= d
    """
    GeneralizedCauchy(2.0, lam)
    _check_common(beta, d)
    arr = _frequencies(z)
    order = (lam - d) / 2.0
    log_a = (1.0 - lam / 2.0) * math.log(2.0) - (d / 2.0) * math.log(2.0 * math.pi) - log_gamma(lam / 2.0)

    value = np.empty(arr.shape, dtype=float)
    at_zero = arr == 0
    if np.any(at_zero):
        if lam <= d:
            raise UnboundedDensityError(f"Density of the delta=2 Cauchy kernel is unbounded at z=0 for lambda={lam} <= d={d}")
        value[at_zero] = math.exp(
            d * math.log(beta) + log_gamma(order) - d * math.log(2.0) - (d / 2.0) * math.log(math.pi) - log_gamma(lam / 2.0)
        )
    if np.any(~at_zero):
        x = beta * arr[~at_zero]
        log_value = log_a + d * math.log(beta) + order * np.log(x) + np.log(np.asarray(bessel_k_scaled(order, x))) - x
        value[~at_zero] = np.exp(log_value)
    return float(value) if np.ndim(value) == 0 else value


class _Collision(Exception):
    pass


class _Overflow(Exception):
    pass


class _Term(NamedTuple):
    exponent: float
    value: float


def _first_series_term(n: int, a: float, lam: float, delta: float, d: int, log_w: float) -> _Term:
    exponent = lam + n * delta
    m = round((exponent - d) / 2.0)
    if m >= 0 and abs(exponent - d - 2 * m) < _COLLISION_TOL:
        raise _Collision(exponent)
    arg = d / 2.0 - exponent / 2.0
    log_mag = (
        log_gamma(a + n) - log_gamma(n + 1.0) + log_gamma(arg) - log_gamma(exponent / 2.0) + exponent * log_w
    )
    if log_mag > _LOG_MAX:
        raise _Overflow(exponent)
    return _Term(exponent, (-1.0) ** n * gamma_sign(arg) * math.exp(log_mag))


def _second_series_term(n: int, a: float, lam: float, delta: float, d: int, log_w: float) -> _Term:
    exponent = 2.0 * n + d
    m = round((exponent - lam) / delta)
    if m >= 0 and abs(lam + m * delta - exponent) < _COLLISION_TOL:
        raise _Collision(exponent)
    arg = a - exponent / delta
    log_mag = (
        math.log(2.0 / delta)
        - log_gamma(n + 1.0)
        + log_gamma(exponent / delta)
        + log_gamma(arg)
        - log_gamma(n + d / 2.0)
        + exponent * log_w
    )
    if log_mag > _LOG_MAX:
        raise _Overflow(exponent)
    return _Term(exponent, (-1.0) ** n * gamma_sign(arg) * math.exp(log_mag))


def _sum_series(z: float, delta: float, lam: float, beta: float, d: int, max_terms: int) -> Tuple[float, SeriesDiagnostics]:
    # Both series are merged in order of their powers of (beta z / 2).
    a = lam / delta
    log_w = math.log(beta * z / 2.0)
    n1 = n2 = 0
    head1 = _first_series_term(n1, a, lam, delta, d, log_w)
    head2 = _second_series_term(n2, a, lam, delta, d, log_w)

    terms: List[float] = []
    partial = 0.0
    max_partial = 0.0
    max_term = 0.0
    small = 0
    previous = math.inf
    while len(terms) < max_terms:
        if abs(head1.exponent - head2.exponent) < _MERGE_TOL:
            step = head1.value + head2.value
            n1 += 1
            n2 += 1
            head1 = _first_series_term(n1, a, lam, delta, d, log_w)
            head2 = _second_series_term(n2, a, lam, delta, d, log_w)
        elif head1.exponent < head2.exponent:
            step = head1.value
            n1 += 1
            head1 = _first_series_term(n1, a, lam, delta, d, log_w)
        else:
            step = head2.value
            n2 += 1
            head2 = _second_series_term(n2, a, lam, delta, d, log_w)

        terms.append(step)
        partial = math.fsum(terms)
        max_partial = max(max_partial, abs(partial))
        max_term = max(max_term, abs(step))

        threshold = _TRUNCATION * abs(partial)
        decreasing = abs(step) <= previous
        previous = abs(step)
        if decreasing and abs(head1.value) < threshold and abs(head2.value) < threshold:
            small += 1
        else:
            small = 0
        if small >= _SMALL_TERMS:
            break
    else:
        raise SeriesConvergenceError(
            f"Cauchy series did not converge in {max_terms} terms at z={z}", partial_sum=partial
        )

    prefactor = z ** (-d) / math.exp((d / 2.0) * math.log(math.pi) + log_gamma(a))
    ratio = max_partial / abs(partial) if partial != 0 else math.inf
    diagnostics = SeriesDiagnostics(
        terms_used=len(terms),
        max_term_magnitude=max_term * prefactor,
        cancellation_ratio=ratio,
    )
    logger.debug(f"Cauchy series at z={z}: {len(terms)} terms, cancellation {ratio:.3g}")
    return prefactor * partial, diagnostics


def _leading_diagnostics(z: float, delta: float, lam: float, beta: float, d: int) -> SeriesDiagnostics:
    log_w = math.log(beta * z / 2.0)
    heads: List[_Term] = []
    for trial in (lam, lam * (1.0 + _PERTURBATION)):
        for term in (_first_series_term, _second_series_term):
            try:
                heads.append(term(0, trial / delta, trial, delta, d, log_w))
            except _Collision:
                continue
            except _Overflow as exc:
                heads.append(_Term(exc.args[0], math.inf))
        if heads:
            break
    leading = min(heads, key=lambda head: head.exponent)
    prefactor = z ** (-d) / math.exp((d / 2.0) * math.log(math.pi) + log_gamma(trial / delta))
    return SeriesDiagnostics(
        terms_used=1,
        max_term_magnitude=abs(leading.value) * prefactor,
        cancellation_ratio=1.0,
        pole_collision_detected=trial != lam,
        perturbed=trial != lam,
    )


def _cauchy_by_hankel(z: float, delta: float, lam: float, beta: float, d: int, reason: str, base: SeriesDiagnostics) -> Tuple[float, SeriesDiagnostics]:
    logger.info(f"Cauchy series delegated to Hankel quadrature at z={z}, beta={beta}: {reason}")
    get_tracker().track_series(delegated=True)
    value = beta ** d * hankel_numeric(GeneralizedCauchy(delta, lam), d, beta * z)
    diagnostics = SeriesDiagnostics(
        terms_used=base.terms_used,
        max_term_magnitude=base.max_term_magnitude,
        cancellation_ratio=base.cancellation_ratio,
        pole_collision_detected=base.pole_collision_detected,
        perturbed=base.perturbed,
        method=SpectralMethod.NUMERIC_HANKEL,
    )
    return value, diagnostics


def cauchy_spectral_series(
    z: float, delta: float, lam: float, beta: float, d: int, max_terms: Optional[int] = None
) -> Tuple[float, SeriesDiagnostics]:
    """
    Generalized Cauchy density from its two convergent power series.

    Terms are summed in log-magnitude form. Exponent collisions are handled by
    averaging evaluations at lambda (1 +/- 1e-6); heavy cancellation, overflow
    or a large argument beta*z hands the evaluation to Hankel quadrature,
    which the returned diagnostics record.

    Args:
        z: Frequency, z > 0
        delta: Shape, 0 < delta < 2
        lam: Decay, lam > 0
        beta: Scale
        d: Dimension
        max_terms: Term cap (default from config)

    Returns:
        (density value, diagnostics)

    Raises:
        PoleCollisionError: collision persists after perturbation
        SeriesConvergenceError: term cap exhausted
    """
    if not (0 < delta < 2):
        raise ValidationError(f"The Cauchy series needs 0 < delta < 2, got {delta!r}")
    GeneralizedCauchy(delta, lam)
    _check_common(beta, d)
    if not (math.isfinite(z) and z > 0):
        raise DomainError(f"The Cauchy series needs z > 0, got {z!r}")
    max_terms = config.series_max_terms if max_terms is None else max_terms
    if beta * z > config.series_max_argument:
        leading = _leading_diagnostics(z, delta, lam, beta, d)
        return _cauchy_by_hankel(z, delta, lam, beta, d, "argument above series limit", leading)

    try:
        try:
            value, diagnostics = _sum_series(z, delta, lam, beta, d, max_terms)
        except _Collision:
            get_tracker().track_pole_perturbation(lam)
            try:
                low, low_diag = _sum_series(z, delta, lam * (1.0 - _PERTURBATION), beta, d, max_terms)
                high, high_diag = _sum_series(z, delta, lam * (1.0 + _PERTURBATION), beta, d, max_terms)
            except _Collision as exc:
                raise PoleCollisionError(
                    f"Exponent collision at {exc.args[0]} persists after perturbing lambda={lam}"
                )
            value = 0.5 * (low + high)
            merged = SeriesDiagnostics.merge(low_diag, high_diag)
            diagnostics = SeriesDiagnostics(
                terms_used=merged.terms_used,
                max_term_magnitude=merged.max_term_magnitude,
                cancellation_ratio=merged.cancellation_ratio,
                pole_collision_detected=True,
                perturbed=True,
            )
    except _Overflow:
        leading = _leading_diagnostics(z, delta, lam, beta, d)
        return _cauchy_by_hankel(z, delta, lam, beta, d, "term overflow", leading)

    if diagnostics.cancellation_ratio > config.series_cancellation_limit:
        return _cauchy_by_hankel(
            z, delta, lam, beta, d, f"cancellation ratio {diagnostics.cancellation_ratio:.3g}", diagnostics
        )
    get_tracker().track_series(delegated=False)
    return value, diagnostics


def cauchy_spectral_origin(delta: float, lam: float, beta: float, d: int) -> float:
    """
    Limit at z = 0 of the Cauchy density, for lam > d:
    (beta/2)^d 2 Gamma(d/delta) Gamma((lam-d)/delta) / (pi^{d/2} delta Gamma(d/2) Gamma(lam/delta)).
    """
    GeneralizedCauchy(delta, lam)
    _check_common(beta, d)
    if lam <= d:
        raise UnboundedDensityError(f"Cauchy density is unbounded at z=0 for lambda={lam} <= d={d}")
    log_value = (
        d * math.log(beta / 2.0)
        + math.log(2.0 / delta)
        + log_gamma(d / delta)
        + log_gamma((lam - d) / delta)
        - (d / 2.0) * math.log(math.pi)
        - log_gamma(d / 2.0)
        - log_gamma(lam / delta)
    )
    return math.exp(log_value)


def method_for(family: KernelFamily) -> SpectralMethod:
    """Best available density method for a family member."""
    if isinstance(family, Matern):
        return SpectralMethod.CLOSED_FORM_MATERN
    if isinstance(family, GeneralizedCauchy):
        return SpectralMethod.CAUCHY_DELTA2 if family.delta == 2 else SpectralMethod.CAUCHY_SERIES
    if isinstance(family, GeneralizedWendland):
        return SpectralMethod.NUMERIC_HANKEL
    raise ValidationError(f"Unsupported kernel family {family!r}")


def family_spectral(family: KernelFamily, d: int, z: float, beta: float = 1.0) -> Tuple[float, Optional[SeriesDiagnostics]]:
    """
    Density of phi(t / beta) at frequency z with the family's best method.

    Returns:
        (value, diagnostics); diagnostics only for the Cauchy series
    """
    _check_common(beta, d)
    if not (math.isfinite(z) and z >= 0):
        raise DomainError(f"Frequency must be finite and non-negative, got {z!r}")
    method = method_for(family)

    if method is SpectralMethod.CLOSED_FORM_MATERN:
        return matern_spectral(z, family.nu, beta, d), None
    if method is SpectralMethod.CAUCHY_DELTA2:
        return cauchy_delta2_spectral(z, family.lam, beta, d), None
    if method is SpectralMethod.CAUCHY_SERIES:
        if z == 0:
            return cauchy_spectral_origin(family.delta, family.lam, beta, d), None
        return cauchy_spectral_series(z, family.delta, family.lam, beta, d)
    if z == 0:
        return beta ** d * hankel_origin(family, d, support=family.support), None
    return beta ** d * hankel_numeric(family, d, beta * z, support=family.support), None


def _zastavnyi_spectral(spec: ZastavnyiSpec, d: int, z: float) -> Tuple[float, Optional[SeriesDiagnostics]]:
    w1, w2 = spec.weights()
    low, low_diag = family_spectral(spec.family, d, z, spec.beta1)
    high, high_diag = family_spectral(spec.family, d, z, spec.beta2)
    value = (w2 * high - w1 * low) / (w2 - w1)
    if low_diag is None or high_diag is None:
        return value, low_diag or high_diag
    return value, SeriesDiagnostics.merge(low_diag, high_diag)


def zastavnyi_spectral(spec: ZastavnyiSpec, d: int, z: float) -> float:
    """
    Operator density (b2^eps phi_hat_{d,b2}(z) - b1^eps phi_hat_{d,b1}(z)) / (b2^eps - b1^eps).

    Args:
        spec: Operator specification
        d: Dimension
        z: Frequency, z >= 0

    Returns:
        Density value; its sign is what positive-definiteness checks inspect
    """
    value, _ = _zastavnyi_spectral(spec, d, z)
    return value


DensitySource = Union[Matern, GeneralizedCauchy, GeneralizedWendland, ScaledKernel, ZastavnyiSpec]


@dataclass(frozen=True)
class SpectralDensity:
    """
    Density evaluator of a family member, scaled kernel or operator in
    dimension d. For operators beta is 1 and the scales live in the ZastavnyiSpec.
    """

    source: Union[KernelFamily, ZastavnyiSpec]
    d: int
    beta: float
    method: SpectralMethod

    def evaluate(self, z: float) -> Tuple[float, Optional[SeriesDiagnostics]]:
        """Density at one frequency together with series diagnostics."""
        if isinstance(self.source, ZastavnyiSpec):
            return _zastavnyi_spectral(self.source, self.d, float(z))
        return family_spectral(self.source, self.d, float(z), self.beta)

    def values(self, z: ArrayLike) -> np.ndarray:
        """Density over an array of frequencies."""
        arr = np.atleast_1d(_frequencies(z))
        results = parallel_map(lambda x: self.evaluate(x)[0], arr.tolist())
        return np.asarray(results, dtype=float)

    def __call__(self, z: ArrayLike) -> ArrayLike:
        if np.ndim(z) == 0:
            return self.evaluate(float(z))[0]
        return self.values(z)

    def describe(self) -> Dict[str, Any]:
        if isinstance(self.source, ZastavnyiSpec):
            source = self.source.describe()
        else:
            source = {"family": self.source.name, **self.source.params(), "beta": self.beta}
        return {"d": self.d, "method": self.method.value, **source}


def density_for(source: DensitySource, d: int, beta: float = 1.0) -> SpectralDensity:
    """
    Build the density evaluator for a family member, scaled kernel or operator.

    Args:
        source: What to transform
        d: Dimension
        beta: Extra scale for a bare family member

    Returns:
        SpectralDensity tagged with the method used
    """
    if isinstance(source, ScaledKernel):
        beta, source = source.beta, source.family
    if isinstance(source, ZastavnyiSpec):
        _check_common(1.0, d)
        return SpectralDensity(source=source, d=int(d), beta=1.0, method=method_for(source.family))
    _check_common(beta, d)
    return SpectralDensity(source=source, d=int(d), beta=float(beta), method=method_for(source))
