"""Exact homology of finite models of commuting-tuple spaces."""

__version__ = "0.1.0"
