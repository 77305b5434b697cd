"""Refined topological recursion for hypergeometric spectral curves."""
