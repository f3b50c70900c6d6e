"""Two-qutrit density matrices, partial transpose and negativity."""
