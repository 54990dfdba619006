"""Curve matrices, Perron data and convergence experiments for necklace roots
of Thurston-Penner pseudo-Anosov maps."""

__version__ = "0.1.0"
