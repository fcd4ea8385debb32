"""Exact toolkit for finite probability dynamics and stochastic process families."""

__version__ = "0.1.0"
