"""Null holomorphic curves in SL(n, C)/SU(n): lifts, monodromy and curvature of ends."""

__version__ = "0.1.0"
