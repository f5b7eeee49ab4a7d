"""Certification toolkit for the bound lambda_k(G) <= alpha_k n - 1 and its tight cases."""

__version__ = "0.1.0"
