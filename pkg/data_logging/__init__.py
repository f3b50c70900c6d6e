"""Data logging module for the qutrit dephasing simulator: CSV outputs, metadata sidecars and run logs."""
