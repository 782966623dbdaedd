"""Exact-arithmetic workbench for module classification over a pullback
of two discrete valuation domains with common residue field F_p."""

__version__ = "0.1.0"
