"""Kernel families, scaled kernels and the Zastavnyi operator."""

from .families import (
    GeneralizedCauchy,
    GeneralizedWendland,
    KernelFamily,
    Matern,
    ScaledKernel,
    eval_scaled,
    family_from_name,
    gen_cauchy,
    gen_wendland,
    matern,
)
from .operator import ZastavnyiSpec, operator_weights, zastavnyi_eval, zastavnyi_formula

__all__ = [
    "GeneralizedCauchy",
    "GeneralizedWendland",
    "KernelFamily",
    "Matern",
    "ScaledKernel",
    "ZastavnyiSpec",
    "eval_scaled",
    "family_from_name",
    "gen_cauchy",
    "gen_wendland",
    "matern",
    "operator_weights",
    "zastavnyi_eval",
    "zastavnyi_formula",
]
