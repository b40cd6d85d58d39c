"""Relative Serre curves: classification, adelic images and cyclicity constants."""

__version__ = "0.1.0"
