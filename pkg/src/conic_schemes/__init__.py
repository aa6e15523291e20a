"""Coherent configurations on the non-tangent lines of a conic in PG(2, q)."""

__version__ = "0.1.0"
