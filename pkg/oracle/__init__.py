"""Exact-diagonalization reference for small chains and the validation suite built on it."""
