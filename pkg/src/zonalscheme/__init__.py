"""Exact perfect matching association scheme, zonal characters and
ratio-bound certificates for t-intersecting families of perfect matchings."""

__version__ = "0.1.0"
