"""Commutator-driven exact matrix decompositions with independently checkable certificates."""

__version__ = "0.1.0"
