"""Exact computer algebra for triple covers of abelian surfaces."""

__version__ = "0.1.0"
