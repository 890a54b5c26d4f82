"""Pointwise verification of Ricci solitons on pseudo-Riemannian metrics."""

__version__ = "0.1.0"
