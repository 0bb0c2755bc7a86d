"""Zastavnyi Kernels - positive-definiteness toolkit for radial covariance families."""

__version__ = "0.1.0"
