"""The Zastavnyi operator: a rescaled weighted difference of two dilations."""

import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..errors import DegenerateSpecError, ValidationError
from ..numerics.specfun import ArrayLike
from .families import KernelFamily, _distances, _out

# Relative threshold on |b^eps - a^eps| against the larger weight
DEGENERACY_THRESHOLD = 1e-14


def operator_weights(eps: float, beta_a: float, beta_b: float) -> Tuple[float, float]:
    """
    Weights beta_a^eps and beta_b^eps divided by the larger of the two.

    Normalising in log space keeps |eps| in the thousands finite.

    Raises:
        DegenerateSpecError: the weights agree to within the threshold
    """
    logs = (eps * math.log(beta_a), eps * math.log(beta_b))
    top = max(logs)
    w_a, w_b = (math.exp(v - top) for v in logs)
    if abs(w_b - w_a) < DEGENERACY_THRESHOLD:
        raise DegenerateSpecError(
            f"Operator denominator vanishes: beta^eps weights {w_a!r}, {w_b!r} "
            f"(eps={eps}, betas={beta_a}, {beta_b})"
        )
    return w_a, w_b


def zastavnyi_formula(
    family: KernelFamily, eps: float, beta_a: float, beta_b: float, t: ArrayLike
) -> ArrayLike:
    """
    (b^eps phi(t/b) - a^eps phi(t/a)) / (b^eps - a^eps) for any distinct
    positive scales; symmetric in (a, b). Returns exactly 1 at t = 0.
    """
    arr = _distances(t)
    w_a, w_b = operator_weights(eps, beta_a, beta_b)
    value = (w_b * np.asarray(family(arr / beta_b)) - w_a * np.asarray(family(arr / beta_a))) / (w_b - w_a)
    value = np.where(arr == 0, 1.0, value)
    return _out(value)


@dataclass(frozen=True)
class ZastavnyiSpec:
    """
    Operator applied to a family member with exponent eps and scales
    beta1 < beta2.
    """

    family: KernelFamily
    eps: float
    beta1: float
    beta2: float

    def __post_init__(self):
        if not math.isfinite(self.eps) or self.eps == 0:
            raise ValidationError(f"eps must be finite and non-zero, got {self.eps!r}")
        for name, value in (("beta1", self.beta1), ("beta2", self.beta2)):
            if not (math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive and finite, got {value!r}")
        if not self.beta1 < self.beta2:
            raise ValidationError(f"Scales must satisfy beta1 < beta2, got {self.beta1}, {self.beta2}")
        operator_weights(self.eps, self.beta1, self.beta2)

    def weights(self) -> Tuple[float, float]:
        """Normalised (beta1^eps, beta2^eps)."""
        return operator_weights(self.eps, self.beta1, self.beta2)

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return zastavnyi_eval(self, t)

    def describe(self) -> Dict[str, float]:
        return {
            "family": self.family.name,
            **self.family.params(),
            "eps": self.eps,
            "beta1": self.beta1,
            "beta2": self.beta2,
        }


def zastavnyi_eval(spec: ZastavnyiSpec, t: ArrayLike) -> ArrayLike:
    """
    Evaluate the operator at distance(s) t.

    Args:
        spec: Validated operator specification
        t: Distance(s), t >= 0

    Returns:
        Operator value(s); 1 at t = 0, possibly negative elsewhere
    """
    return zastavnyi_formula(spec.family, spec.eps, spec.beta1, spec.beta2, t)
