"""Entanglement diagnostics for symmetric multi-quDit states and the three-level LMG model."""

__version__ = "0.1.0"
