"""Exact window computations for positively graded Z-algebras."""

__version__ = "0.1.0"
