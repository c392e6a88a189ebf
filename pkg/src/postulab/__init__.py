"""Computational postulation of generic lines and fat points."""

__version__ = "0.1.0"
