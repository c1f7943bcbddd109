"""Finite lattice models of quantum time evolution and discrete path sums."""

__version__ = "0.1.0"
