"""Exact computations with windowed DG categories and localization pairs."""

__version__ = "0.1.0"
