"""Dirac operator on the solid torus: Bessel kernels, mode-space operators,
the explicit boundary-condition inverse, and a verification suite."""

__version__ = "0.1.0"
