"""Quasienergy and eigenspace anholonomy in periodically kicked systems."""
__version__ = "0.1.0"
