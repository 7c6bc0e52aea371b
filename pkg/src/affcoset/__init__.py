"""Exact computations with affine actions of finitely generated abelian groups."""

__version__ = "0.1.0"
