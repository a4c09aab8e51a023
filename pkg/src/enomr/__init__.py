"""Multi-resolution ENO finite-difference framework for hyperbolic conservation laws."""

__version__ = "0.1.0"
