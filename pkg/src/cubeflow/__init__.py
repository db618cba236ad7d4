"""Combinatorial core of a Khovanov-to-monopole spectral sequence toolkit."""

__version__ = "0.1.0"
