"""Propagator for the step potential from lattice path counting and the path decomposition expansion."""

__version__ = "0.1.0"
