"""Enumerate constrained lattice walks and guess-and-check closed
descriptions of their counting sequences."""

__version__ = "0.1.0"
