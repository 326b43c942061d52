"""Spectrahedral certificate workbench for hyperbolic graph polynomials."""

__version__ = "0.1.0"
