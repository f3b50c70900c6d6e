"""Configuration module for the qutrit dephasing simulator."""
