"""Exact dimer-model computations on surface graphs."""
