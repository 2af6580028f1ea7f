"""Decoherence trajectories of multi-qubit entangled states."""

__version__ = "0.1.0"
