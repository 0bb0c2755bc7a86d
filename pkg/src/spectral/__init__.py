"""Radial spectral densities: closed forms, series and Hankel quadrature."""

from .densities import (
    SeriesDiagnostics,
    SpectralDensity,
    SpectralMethod,
    cauchy_delta2_spectral,
    cauchy_spectral_origin,
    cauchy_spectral_series,
    density_for,
    family_spectral,
    matern_spectral,
    zastavnyi_spectral,
)
from .hankel import hankel_numeric, hankel_origin

__all__ = [
    "SeriesDiagnostics",
    "SpectralDensity",
    "SpectralMethod",
    "cauchy_delta2_spectral",
    "cauchy_spectral_origin",
    "cauchy_spectral_series",
    "density_for",
    "family_spectral",
    "hankel_numeric",
    "hankel_origin",
    "matern_spectral",
    "zastavnyi_spectral",
]
