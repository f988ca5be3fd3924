"""Generalized Ferrers ideals, their specializations and cellular resolutions."""

__version__ = "0.1.0"
