"""Exact and high-precision verification of a discrete Painleve E6(1)
equation arising from semiclassical orthogonal polynomials."""

__version__ = "0.1.0"
