"""Certified checks of Stirling-type bounds on factorials and binomial coefficients."""

__version__ = "0.1.0"
