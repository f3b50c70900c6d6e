"""XY spin chain with three-site interaction: spectra and decoherence factors."""
