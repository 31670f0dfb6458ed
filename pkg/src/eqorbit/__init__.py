"""Exact computations with equivariant chain complexes, enriched orbit categories,
presheaves over them, and the associated lifting and adjunction checks."""

__version__ = "0.1.0"
