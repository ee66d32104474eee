"""Exact computation of quasi-F^e-split heights."""

__version__ = "0.1.0"
