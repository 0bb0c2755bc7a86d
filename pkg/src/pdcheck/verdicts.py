"""Verdict records produced by the positive-definiteness checks."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Union

from ..errors import ValidationError

SCHEMA_VERSION = 1


class CheckMethod(str, Enum):
    """Numerical test behind a verdict."""

    SPECTRAL_GRID = "SpectralGrid"
    GRAM_EIGEN = "GramEigen"
    COMPLETE_MONOTONICITY = "CompleteMonotonicity"


class Verdict(str, Enum):
    """Outcome of a finite numerical test: evidence, never proof."""

    CONSISTENT = "consistent"
    REFUTED = "refuted"


@dataclass(frozen=True)
class PDVerdict:
    """
    Result of one positive-definiteness test.

    The witness is the inspected value furthest below zero (relative to the
    tolerance): a frequency for spectral checks, a point index for Gram
    checks and an (order, s) pair for complete monotonicity.
    """

    method: CheckMethod
    verdict: Verdict
    witness_location: Union[float, int, tuple]
    witness_value: float
    tolerance: float
    grid_spec: Dict[str, Any]
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.REFUTED and not self.witness_value < -self.tolerance:
            raise ValidationError(
                f"Refuted verdict needs witness below -{self.tolerance}, got {self.witness_value}"
            )
        if self.verdict is Verdict.CONSISTENT and self.witness_value < -self.tolerance:
            raise ValidationError(
                f"Consistent verdict cannot carry witness {self.witness_value} below -{self.tolerance}"
            )

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED

    def to_record(self) -> Dict[str, Any]:
        """JSON-ready dictionary."""
        location = self.witness_location
        if isinstance(location, tuple):
            location = list(location)
        return {
            "schema_version": SCHEMA_VERSION,
            "record": "pd_verdict",
            "method": self.method.value,
            "verdict": self.verdict.value,
            "witness_location": location,
            "witness_value": self.witness_value,
            "tolerance": self.tolerance,
            "grid_spec": self.grid_spec,
            **({"details": self.details} if self.details else {}),
        }


def classify(witness_value: float, tolerance: float) -> Verdict:
    """Refuted iff the witness lies below -tolerance."""
    return Verdict.REFUTED if witness_value < -tolerance else Verdict.CONSISTENT
