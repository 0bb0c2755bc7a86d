"""Numerical positive-definiteness checks, membership conditions and lemma verifiers."""

from .checks import complete_monotonicity_check, gram_min_eigenvalue, spectral_nonnegativity
from .lemmas import Lemma1Report, Lemma2Report, lemma1_bounds_check, lemma2_monotonicity_check
from .theorems import CoherenceRecord, Expectation, TheoremClaim, TheoremId, theorem_predicate, verify_claim
from .verdicts import SCHEMA_VERSION, CheckMethod, PDVerdict, Verdict

__all__ = [
    "SCHEMA_VERSION",
    "CheckMethod",
    "CoherenceRecord",
    "Expectation",
    "Lemma1Report",
    "Lemma2Report",
    "PDVerdict",
    "TheoremClaim",
    "TheoremId",
    "Verdict",
    "complete_monotonicity_check",
    "gram_min_eigenvalue",
    "lemma1_bounds_check",
    "lemma2_monotonicity_check",
    "spectral_nonnegativity",
    "theorem_predicate",
    "verify_claim",
]
