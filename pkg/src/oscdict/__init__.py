"""Finite oscillator dictionaries over prime fields."""

__version__ = "0.1.0"
