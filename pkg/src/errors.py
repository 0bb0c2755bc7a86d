"""Exception hierarchy shared by every module.

Validation problems (bad parameters, ill-posed requests) and numerical
failures (non-convergence, overflow) are kept apart so that a verdict is
never produced from a computation that silently went wrong.
"""

from typing import Optional


class ZastavnyiError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ZastavnyiError, ValueError):
    """Invalid parameters or configuration."""


class DomainError(ValidationError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class DegenerateSpecError(ValidationError):
    """Operator denominator too small relative to its terms."""


class UnboundedDensityError(DomainError):
    """Spectral density requested at the origin where it is unbounded."""


class HypothesisViolationError(ValidationError):
    """Preconditions of a lemma check are not met."""


class NumericalError(ZastavnyiError, ArithmeticError):
    """A numerical method failed to deliver a finite, converged value."""


class OverflowRangeError(NumericalError):
    """Result exceeds the representable floating-point range."""


class UnderflowError(NumericalError):
    """Result underflows to zero and the caller asked to be told."""


class QuadratureError(NumericalError):
    """Quadrature did not reach its tolerance."""

    def __init__(self, message: str, partial_estimate: Optional[float] = None):
        super().__init__(message)
        self.partial_estimate = partial_estimate


class SeriesConvergenceError(NumericalError):
    """Series exhausted its term budget."""

    def __init__(self, message: str, partial_sum: Optional[float] = None):
        super().__init__(message)
        self.partial_sum = partial_sum


class PoleCollisionError(NumericalError):
    """Series exponents collide and the perturbation fallback failed too."""


class EigenSolverError(NumericalError):
    """Symmetric eigen-solver did not converge."""


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit status."""
    if isinstance(error, ValidationError):
        return 1
    if isinstance(error, NumericalError):
        return 2
    return 2
