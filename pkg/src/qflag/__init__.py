"""Exact computations for quantized irreducible flag manifolds."""
