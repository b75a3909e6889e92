"""Permutation-invariant quantum codes, geometric-phase-gate simulation,
and measurement-free code switching."""

__version__ = "0.1.0"
