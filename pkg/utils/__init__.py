"""Shared data structures and helpers."""

__version__ = "1.0.0"
