"""Dictionary-returning tools shared by the command line and the MCP server."""

from .evaluate import evaluate_kernel, evaluate_operator, spectral_density
from .figure import FIGURE1_PANELS, figure1
from .verify import lemma_bounds, pd_check, predicate, theorem_sweep

__all__ = [
    "FIGURE1_PANELS",
    "evaluate_kernel",
    "evaluate_operator",
    "figure1",
    "lemma_bounds",
    "pd_check",
    "predicate",
    "spectral_density",
    "theorem_sweep",
]
