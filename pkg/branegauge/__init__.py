"""
BraneGauge
Holomorphic gauge fields on B-branes

BraneGauge decides when complexes of sheaves on P^n and on flat tori carry
holomorphic gauge fields, computes gauge spaces, and finds critical points
of the Yang-Mills functional on the cohomology of constant torus branes.
"""

__version__ = "0.1.0"
__author__ = "BraneGauge"
