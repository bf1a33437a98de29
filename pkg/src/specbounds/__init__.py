"""Numerical laboratory for eigenvalue bounds of non-selfadjoint perturbations."""

__version__ = "0.1.0"
