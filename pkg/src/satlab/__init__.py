"""Exact laboratory for s-saturated and cross-saturated set families."""

__version__ = "0.1.0"
