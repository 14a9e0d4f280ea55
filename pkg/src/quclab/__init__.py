"""Quantum-UC execution kernel and a commitment-based quantum OT laboratory."""

__version__ = "0.1.0"
