"""Tropical cycle lengths and j-invariant valuations of plane cubics."""

__version__ = "0.1.0"
