"""Periodically kicked few-level quantum systems."""

__version__ = "0.1.0"
