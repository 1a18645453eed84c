"""
BraneGauge Core Module

Gauge fields on complexes of sheaves: exact linear algebra, projective
and torus models, the Yang-Mills functional, the Čech line bundle check
and characteristic classes.
This module contains NO file or network I/O.
Pure functions and immutable values.
"""

from .errors import BraneGaugeError, ValidationReport
from .linalg import Backend, get_algebra, kernel_basis
from .hom import MatrixComplex, cohomology_dimensions, hom_cohomology, hom_differential
from .polynomials import RealPoly
from .projective import (
    TwistedComplex,
    cone,
    gauge_field_exists,
    gauge_space_dimension,
    make_complex,
    minimize,
)
from .torus import (
    ConnectionFamily,
    ConstantComplex,
    cohomology_splitting,
    curvature,
    curvature_norm,
    euler_poincare_check,
    gauge_space_basis,
    induced_connection,
    mapping_cone,
    phi_trace_form,
    validate_connection,
)
from .yang_mills import (
    YMInstance,
    assemble,
    count_report,
    extend_variation,
    is_yang_mills_per_degree,
    solve,
    stationarity_system,
)
from .cech import CechLineBundle, chern_integral, connection_exists, is_coboundary, zeta_cocycle
from .char_classes import CohRing, predict_chi, torus_chi_check

__all__ = [
    "BraneGaugeError",
    "ValidationReport",
    "Backend",
    "get_algebra",
    "kernel_basis",
    "MatrixComplex",
    "cohomology_dimensions",
    "hom_cohomology",
    "hom_differential",
    "RealPoly",
    "TwistedComplex",
    "cone",
    "gauge_field_exists",
    "gauge_space_dimension",
    "make_complex",
    "minimize",
    "ConnectionFamily",
    "ConstantComplex",
    "cohomology_splitting",
    "curvature",
    "curvature_norm",
    "euler_poincare_check",
    "gauge_space_basis",
    "induced_connection",
    "mapping_cone",
    "phi_trace_form",
    "validate_connection",
    "YMInstance",
    "assemble",
    "count_report",
    "extend_variation",
    "is_yang_mills_per_degree",
    "solve",
    "stationarity_system",
    "CechLineBundle",
    "chern_integral",
    "connection_exists",
    "is_coboundary",
    "zeta_cocycle",
    "CohRing",
    "predict_chi",
    "torus_chi_check",
]
