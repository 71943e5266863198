"""Symbolic-numeric verification toolkit for a fourth-order dispersive
wave model in one time and two space dimensions: point-symmetry
checking, reduction auditing, conservation-law construction, and
travelling-wave numerics."""

__version__ = "1.0.0"
