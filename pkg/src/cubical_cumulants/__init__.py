"""Exact discrete calculus on overlapping cubical lattices, with Taylor brackets and scale cumulants."""

from .scalars import H, ONE, ZERO, LaurentH

__version__ = "0.1.0"

__all__ = ["H", "ONE", "ZERO", "LaurentH", "__version__"]
