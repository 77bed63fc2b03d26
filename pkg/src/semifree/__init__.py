"""Exact computations for semi-free Hamiltonian circle actions on six-manifolds
encoded by labelled momentum polytopes."""

__version__ = "0.1.0"
