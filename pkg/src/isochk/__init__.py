"""Isochronicity analysis of planar polynomial Hamiltonian systems."""

__version__ = "0.1.0"
