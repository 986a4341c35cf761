"""Exact continued-fraction dynamics and geodesic coding on modular surfaces."""

__version__ = "0.1.0"
