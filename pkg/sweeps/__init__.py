"""Parameter sweeps over time, eta and alpha, and the critical-alpha search."""
