"""Dirichlet eigenvalues of balls and planar convex shapes.

Bessel zeros, ball spectra, component-count bounds for eigenvalue minimisers,
a P1 finite-element solver for planar domains and the experiments built on it.
"""

__version__ = "0.1.0"
