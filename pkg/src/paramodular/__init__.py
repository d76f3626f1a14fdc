"""Hecke eigenvalues of paramodular forms of prime level via algebraic modular forms on GU_2(D)."""

__version__ = "0.1.0"
