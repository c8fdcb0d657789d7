"""Exact toolkit for cyclotomic Hecke algebras, blob algebras and alcove recursions."""

__version__ = "0.1.0"
