"""Variation-diminishing Schoenberg splines: operator, spectrum, iterates and bounds."""

__version__ = "0.1.0"
