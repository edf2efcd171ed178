"""Desk-scale experiments with positional graphs, conditional norms and Tsirelson-type spaces."""

__version__ = "0.1.0"
