"""Workbench for ell-modular decomposition matrices of unipotent blocks at d=4.

The package keeps every computation exact: rational scalars, factored
cyclotomic polynomials in q, and integer polynomials in small named
unknowns.  Floating point is never used.
"""

__version__ = "0.1.0"
