"""Parameter conditions for membership of operator outputs in Phi_d / Phi_inf,
and the coherence check that confronts them with the numerical tests."""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from ..errors import ValidationError
from ..kernels.families import GeneralizedCauchy, GeneralizedWendland, KernelFamily, Matern, ScaledKernel
from ..kernels.operator import ZastavnyiSpec
from .checks import complete_monotonicity_check, gram_min_eigenvalue, spectral_nonnegativity
from .verdicts import SCHEMA_VERSION, PDVerdict

logger = logging.getLogger(__name__)

PHI_D = "Phi_d"
PHI_INF = "Phi_inf"

# Gram dimensions standing in for Phi_inf
INFINITE_GRAM_DIMENSIONS = (5, 10)
# Search limit for witnesses of non-membership
REFUTATION_SEARCH_LIMIT = 1e6


class TheoremId(str, Enum):
    """Source of a membership claim."""

    T2_MATERN = "T2_matern"
    T3_WENDLAND = "T3_wendland"
    T4_CAUCHY = "T4_cauchy"
    T5_CAUCHY2 = "T5_cauchy2"
    GW_BASE = "GW_base"
    GW_POSITIVE_EPS = "GW_positive_eps"
    MATERN_BASE = "Matern_base"
    CAUCHY_BASE = "Cauchy_base"


class Expectation(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    OUTSIDE = "outside_theorem_scope"


@dataclass(frozen=True)
class TheoremClaim:
    """
    Expected membership at one parameter point.

    subject is the family member the numerical checks run on; it differs
    from family only for T5, whose Bessel form belongs to C(.; 2, lambda/2).
    iff marks claims backed by an "if and only if" clause.
    """

    theorem_id: TheoremId
    family: KernelFamily
    eps: Optional[float]
    d: Optional[int]
    expected: Expectation
    membership: str
    iff: bool
    subject: KernelFamily
    note: str = ""

    def to_record(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "record": "theorem_claim",
            "theorem_id": self.theorem_id.value,
            "family": self.family.name,
            "params": self.family.params(),
            "eps": self.eps,
            "d": self.d,
            "expected": self.expected.value,
            "membership": self.membership,
            "iff": self.iff,
            "subject": {"family": self.subject.name, **self.subject.params()},
            **({"note": self.note} if self.note else {}),
        }


def _claim(theorem_id, family, eps, d, expected, membership, iff, subject=None, note="") -> TheoremClaim:
    return TheoremClaim(
        theorem_id=theorem_id,
        family=family,
        eps=eps,
        d=d,
        expected=expected,
        membership=membership,
        iff=iff,
        subject=subject or family,
        note=note,
    )


def _matern_claim(family: Matern, eps: float, d: Optional[int]) -> TheoremClaim:
    if eps > 0:
        expected = Expectation.MEMBER if eps >= 2 * family.nu else Expectation.NON_MEMBER
        return _claim(TheoremId.T2_MATERN, family, eps, d, expected, PHI_INF, True)
    if d is None:
        # eps <= -d fails for every d > -eps
        return _claim(TheoremId.T2_MATERN, family, eps, d, Expectation.NON_MEMBER, PHI_INF, True)
    expected = Expectation.MEMBER if eps <= -d else Expectation.NON_MEMBER
    return _claim(TheoremId.T2_MATERN, family, eps, d, expected, PHI_D, True)


def _wendland_claim(family: GeneralizedWendland, eps: float, d: int, theorem_id: TheoremId) -> TheoremClaim:
    kappa, mu = family.kappa, family.mu
    strong = mu >= (d + 7) / 2.0 + kappa
    if theorem_id is TheoremId.GW_POSITIVE_EPS:
        if eps > 0 and eps >= 2 * kappa + 1 and strong:
            return _claim(theorem_id, family, eps, d, Expectation.MEMBER, PHI_D, False)
        return _claim(theorem_id, family, eps, d, Expectation.OUTSIDE, PHI_D, False)

    if eps == -d:
        expected = Expectation.MEMBER if mu >= (d + 1) / 2.0 + kappa else Expectation.NON_MEMBER
        return _claim(theorem_id, family, eps, d, expected, PHI_D, True)
    if eps >= 2 * kappa + 1 and strong:
        return _claim(theorem_id, family, eps, d, Expectation.MEMBER, PHI_D, False)
    if eps <= -d and strong:
        return _claim(theorem_id, family, eps, d, Expectation.MEMBER, PHI_D, False)
    return _claim(
        theorem_id,
        family,
        eps,
        d,
        Expectation.OUTSIDE,
        PHI_D,
        False,
        note="the exclusive clause at eps = 2 kappa + 1 conflicts with the sufficient condition and is not tested",
    )


def _cauchy_claim(family: GeneralizedCauchy, eps: float, d: Optional[int]) -> TheoremClaim:
    if family.delta == 2:
        if d is None:
            raise ValidationError("The delta = 2 Cauchy condition needs a dimension")
        lam = family.lam
        subject = GeneralizedCauchy(2.0, lam / 2.0)
        note = "numerical checks run on C(.; 2, lambda/2), the kernel whose density has the Bessel form"
        if lam < 2 * d - 4 and 2 * eps < -lam:
            return _claim(TheoremId.T5_CAUCHY2, family, eps, d, Expectation.MEMBER, PHI_D, False, subject, note)
        return _claim(TheoremId.T5_CAUCHY2, family, eps, d, Expectation.OUTSIDE, PHI_D, False, subject, note)

    if eps > 0:
        if family.delta < 1 and eps >= family.delta:
            return _claim(TheoremId.T4_CAUCHY, family, eps, d, Expectation.MEMBER, PHI_INF, False)
        return _claim(
            TheoremId.T4_CAUCHY, family, eps, d, Expectation.OUTSIDE, PHI_INF, False,
            note="no condition is available for eps > 0 outside eps >= delta, delta < 1",
        )
    expected = Expectation.MEMBER if eps <= -family.lam else Expectation.NON_MEMBER
    return _claim(TheoremId.T4_CAUCHY, family, eps, d, expected, PHI_INF, True)


def theorem_predicate(
    family: KernelFamily,
    eps: Optional[float] = None,
    d: Optional[int] = None,
    theorem_id: Optional[TheoremId] = None,
) -> TheoremClaim:
    """
    Expected membership of a family member (eps None) or of its operator
    output, derived from the parameter conditions alone.

    Args:
        family: Family member
        eps: Operator exponent, None for the bare family
        d: Dimension, None standing for Phi_inf
        theorem_id: Force a specific condition set (only GW_positive_eps
            differs from the one inferred)

    Returns:
        TheoremClaim
    """
    if d is not None and (int(d) != d or d < 1):
        raise ValidationError(f"Dimension must be a positive integer, got d={d!r}")
    if eps is not None and (not math.isfinite(eps) or eps == 0):
        raise ValidationError(f"eps must be finite and non-zero, got {eps!r}")

    if isinstance(family, GeneralizedWendland):
        if d is None:
            raise ValidationError("Wendland conditions need a dimension")
        if eps is None:
            expected = Expectation.MEMBER if family.mu >= (d + 1) / 2.0 + family.kappa else Expectation.NON_MEMBER
            return _claim(TheoremId.GW_BASE, family, None, d, expected, PHI_D, True)
        chosen = TheoremId.GW_POSITIVE_EPS if theorem_id is TheoremId.GW_POSITIVE_EPS else TheoremId.T3_WENDLAND
        return _wendland_claim(family, eps, int(d), chosen)

    if isinstance(family, Matern):
        if eps is None:
            return _claim(TheoremId.MATERN_BASE, family, None, d, Expectation.MEMBER, PHI_INF, False)
        return _matern_claim(family, eps, d)

    if isinstance(family, GeneralizedCauchy):
        if eps is None:
            return _claim(TheoremId.CAUCHY_BASE, family, None, d, Expectation.MEMBER, PHI_INF, False)
        return _cauchy_claim(family, eps, d)

    raise ValidationError(f"Unsupported kernel family {family!r}")


@dataclass(frozen=True)
class CoherenceRecord:
    """A claim together with the numerical verdicts gathered for it."""

    claim: TheoremClaim
    verdicts: List[PDVerdict] = field(default_factory=list)

    @property
    def coherent(self) -> bool:
        if self.claim.expected is Expectation.MEMBER:
            return not any(v.refuted for v in self.verdicts)
        if self.claim.expected is Expectation.NON_MEMBER and self.claim.iff:
            return any(v.refuted for v in self.verdicts)
        return True

    @property
    def member_refuted(self) -> bool:
        """A member claim contradicted by a check."""
        return self.claim.expected is Expectation.MEMBER and any(v.refuted for v in self.verdicts)

    def to_record(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "record": "coherence",
            "claim": self.claim.to_record(),
            "verdicts": [v.to_record() for v in self.verdicts],
            "coherent": self.coherent,
        }


def _spectral_dimension(claim: TheoremClaim) -> int:
    if claim.d is not None:
        return int(claim.d)
    # eps > -d makes the small-frequency sign visible for eps < 0
    if claim.eps is not None and claim.eps < 0:
        return max(3, int(math.floor(-claim.eps)) + 1)
    return 3


def verify_claim(
    claim: TheoremClaim,
    beta1: float,
    beta2: float,
    n_points: Optional[int] = None,
    seed: Optional[int] = None,
    k_max: int = 8,
) -> CoherenceRecord:
    """
    Run the numerical checks that apply to a claim.

    Phi_d claims get the spectral and Gram checks in dimension d. Phi_inf
    claims get complete monotonicity, Gram checks in dimensions 5 and 10
    and a spectral check in a proxy dimension. Non-member claims extend the
    spectral search towards high frequencies.

    Args:
        claim: Claim from theorem_predicate
        beta1: Smaller scale (the only scale for a bare family)
        beta2: Larger scale
        n_points: Gram matrix size
        seed: Gram point seed
        k_max: Highest complete monotonicity order

    Returns:
        CoherenceRecord
    """
    if claim.eps is None:
        kernel = ScaledKernel(claim.subject, beta1)
    else:
        kernel = ZastavnyiSpec(claim.subject, claim.eps, beta1, beta2)
    extend = REFUTATION_SEARCH_LIMIT if claim.expected is Expectation.NON_MEMBER else None

    verdicts: List[PDVerdict] = []
    if claim.membership == PHI_INF:
        verdicts.append(complete_monotonicity_check(kernel, k_max=k_max))
        for dim in INFINITE_GRAM_DIMENSIONS:
            verdicts.append(gram_min_eigenvalue(kernel, dim, n_points, seed))
        verdicts.append(spectral_nonnegativity(kernel, _spectral_dimension(claim), extend_to=extend))
    else:
        verdicts.append(spectral_nonnegativity(kernel, int(claim.d), extend_to=extend))
        verdicts.append(gram_min_eigenvalue(kernel, int(claim.d), n_points, seed))

    record = CoherenceRecord(claim=claim, verdicts=verdicts)
    if not record.coherent:
        logger.warning(f"Claim {claim.theorem_id.value} ({claim.expected.value}) not matched by numerical checks")
    return record
