"""Residues of 2-flags of holomorphic foliations: exact local algebra and torus quadrature."""

__version__ = "0.1.0"
