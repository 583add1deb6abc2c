# Spectral flow, certification, adiabatic evolution and structure analysis
