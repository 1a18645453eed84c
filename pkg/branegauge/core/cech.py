"""
BraneGauge Čech Line Bundles

Line bundles O(k) on P^1 with the two-chart cover (z on U_0, w = 1/z on U_1)
and transition φ_01 = z^k. The 1-cocycle ∂ log φ / 2πi decides whether a
holomorphic connection exists; a Hermitian weight f_0 = (1 + a|z|²)^e gives
the Chern form whose integral is c_1.

Forms on the overlap are Laurent polynomials times dz with rational
coefficients measured in units of 1/(2πi), so coboundary decisions are exact.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np
import structlog
from sympy import I, Rational, Symbol, pi, residue, simplify

from .errors import MetricError, QuadratureError


logger = structlog.get_logger(__name__)

DEFAULT_GRID = 512
QUADRATURE_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class CechLineBundle:
    """
    O(k) on P^1 with weight f_0 = (1 + a|z|²)^e on chart 0.

    The weight is consistent with the transition iff e = k; the chart-1
    weight is then f_1 = |φ_01|⁻² f_0 = (|w|² + a)^k.
    """
    k: int
    metric_scale: Fraction = Fraction(1)
    metric_exponent: int | None = None

    @property
    def exponent(self) -> int:
        return self.k if self.metric_exponent is None else self.metric_exponent


@dataclass(frozen=True)
class LaurentForm:
    """Σ_j c_j v^j dv / (2πi) in the chart variable ``variable``; zero coefficients dropped."""
    coefficients: Mapping[int, Fraction] = field(default_factory=dict)
    variable: str = "z"

    def __post_init__(self):
        cleaned = {int(j): Fraction(c) for j, c in self.coefficients.items() if c != 0}
        object.__setattr__(self, "coefficients", cleaned)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, power: int) -> Fraction:
        return self.coefficients.get(power, Fraction(0))

    @property
    def residue(self) -> Fraction:
        """Coefficient of v⁻¹ dv, in units of 1/(2πi)."""
        return self.coefficient(-1)

    def to_sympy(self, symbol: Symbol | None = None):
        """Coefficient of dv as a sympy expression, 1/(2πi) kept symbolic."""
        v = symbol or Symbol(self.variable)
        expr = sum(
            (Rational(c.numerator, c.denominator) * v ** j for j, c in self.coefficients.items()),
            Rational(0),
        )
        return expr / (2 * pi * I)

    def to_dict(self) -> dict:
        return {
            "variable": self.variable,
            "unit": "1/(2*pi*i)",
            "coefficients": {str(j): str(c) for j, c in sorted(self.coefficients.items())},
        }


def zeta_cocycle(bundle: CechLineBundle) -> LaurentForm:
    """ζ = ∂ log z^k / (2πi) = (k / 2πi) dz/z."""
    return LaurentForm({-1: Fraction(bundle.k)})


@dataclass(frozen=True)
class CoboundaryDecision:
    is_coboundary: bool
    obstruction: Fraction
    beta0: LaurentForm | None = None
    beta1: LaurentForm | None = None

    def to_dict(self) -> dict:
        return {
            "is_coboundary": self.is_coboundary,
            "obstruction": str(self.obstruction),
            "beta0": self.beta0.to_dict() if self.beta0 else None,
            "beta1": self.beta1.to_dict() if self.beta1 else None,
        }


def is_coboundary(zeta: LaurentForm) -> CoboundaryDecision:
    """
    Solve β_1 − β_0 = ζ with β_0 = Σ_{j≥0} b_j z^j dz and β_1 = Σ_{m≥0} c_m w^m dw.

    On the overlap dw = −z⁻² dz, so β_1 contributes only powers ≤ −2 and β_0
    only powers ≥ 0. The z⁻¹ coefficient can be matched by neither and is the
    obstruction.
    """
    obstruction = zeta.residue
    if obstruction != 0:
        return CoboundaryDecision(False, obstruction)
    beta0 = {j: -c for j, c in zeta.coefficients.items() if j >= 0}
    beta1 = {-j - 2: -c for j, c in zeta.coefficients.items() if j <= -2}
    return CoboundaryDecision(
        True,
        Fraction(0),
        beta0=LaurentForm(beta0, "z"),
        beta1=LaurentForm(beta1, "w"),
    )


def connection_exists(bundle: CechLineBundle) -> bool:
    """A holomorphic connection exists iff the cocycle is a coboundary."""
    return is_coboundary(zeta_cocycle(bundle)).is_coboundary


def symbolic_residue(zeta: LaurentForm):
    """Residue at 0 of the dz-coefficient, computed by sympy."""
    z = Symbol(zeta.variable)
    return residue(zeta.to_sympy(z), z, 0)


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

def validate_metric(bundle: CechLineBundle) -> None:
    if bundle.metric_scale <= 0:
        raise MetricError(f"metric scale must be positive, got {bundle.metric_scale}")
    if bundle.exponent != bundle.k:
        raise MetricError(
            f"weight exponent {bundle.exponent} is inconsistent with transition z^{bundle.k}"
        )


@dataclass(frozen=True)
class MetricConsistency:
    chart1_weight: str
    closed_form: str
    holds: bool

    def to_dict(self) -> dict:
        return {
            "chart1_weight": self.chart1_weight,
            "closed_form": self.closed_form,
            "holds": self.holds,
        }


def metric_consistency(bundle: CechLineBundle) -> MetricConsistency:
    """
    Check f_1 = |z|^{-2k} f_0 equals the smooth weight (|w|² + a)^k.

    With s = |w| = 1/|z| the chart-1 weight is s^{2k} (1 + a/s²)^e.

    Raises:
        MetricError: if the scale is not positive or the relation fails
    """
    if bundle.metric_scale <= 0:
        raise MetricError(f"metric scale must be positive, got {bundle.metric_scale}")
    s = Symbol("s", positive=True)
    a = Rational(bundle.metric_scale.numerator, bundle.metric_scale.denominator)
    chart1 = s ** (2 * bundle.k) * (1 + a / s ** 2) ** bundle.exponent
    closed = (s ** 2 + a) ** bundle.k
    holds = simplify(chart1 - closed) == 0
    result = MetricConsistency(str(chart1), str(closed), bool(holds))
    if not result.holds:
        raise MetricError(f"chart weights disagree on the overlap: {result.chart1_weight} != {result.closed_form}")
    return result


# ---------------------------------------------------------------------------
# Chern form
# ---------------------------------------------------------------------------

def chern_density(bundle: CechLineBundle, r_squared: np.ndarray) -> np.ndarray:
    """(i/2π) ∂∂̄ log f_0 = (e/π) a / (1 + a r²)² dx ∧ dy."""
    a = float(bundle.metric_scale)
    return (bundle.exponent / math.pi) * a / (1.0 + a * r_squared) ** 2


def _midpoint(bundle: CechLineBundle, grid: int) -> float:
    h = math.pi / grid
    angles = -math.pi / 2 + (np.arange(grid) + 0.5) * h
    t = np.tan(angles)
    jac = 1.0 / np.cos(angles) ** 2
    x, y = np.meshgrid(t, t, indexing="ij")
    values = chern_density(bundle, x ** 2 + y ** 2) * np.outer(jac, jac) * h * h
    return math.fsum(values.ravel().tolist())


@dataclass(frozen=True)
class ChernQuadrature:
    value: float
    half_value: float
    grid: int

    @property
    def error_estimate(self) -> float:
        return abs(self.value - self.half_value)

    @property
    def extrapolated(self) -> float:
        """Richardson value (4 I_N - I_{N/2}) / 3 for a second-order rule."""
        return (4.0 * self.value - self.half_value) / 3.0

    @property
    def extrapolation_error(self) -> float:
        return abs(self.extrapolated - self.value)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "half_value": self.half_value,
            "extrapolated": self.extrapolated,
            "grid": self.grid,
            "error_estimate": self.error_estimate,
            "extrapolation_error": self.extrapolation_error,
        }


def chern_quadrature(bundle: CechLineBundle, grid: int = DEFAULT_GRID,
                     check_tol: float = QUADRATURE_CHECK_TOL) -> ChernQuadrature:
    """
    Integrate the Chern form over the chart C ⊂ P^1.

    The plane is mapped to a square by x = tan α, y = tan β and integrated
    with the N x N midpoint rule. The N/2 result must agree within
    ``check_tol`` (relative to max(1, |value|)); the pair also gives the
    Richardson-extrapolated value reported alongside.

    Raises:
        MetricError: on an inconsistent weight
        QuadratureError: if the half-resolution check fails
    """
    validate_metric(bundle)
    if grid < 2:
        raise QuadratureError(f"grid must be at least 2, got {grid}")
    result = ChernQuadrature(_midpoint(bundle, grid), _midpoint(bundle, max(grid // 2, 1)), grid)
    logger.debug("cech_quadrature_done", k=bundle.k, grid=grid, value=result.value,
                 error_estimate=result.error_estimate)
    if result.error_estimate > check_tol * max(1.0, abs(result.value)):
        raise QuadratureError(
            f"quadrature did not settle: {result.value} at N={grid} vs {result.half_value} at N={grid // 2}"
        )
    return result


def chern_integral(bundle: CechLineBundle, grid: int = DEFAULT_GRID) -> float:
    """∫_{P^1} c_1 of the weighted bundle; equals k."""
    return chern_quadrature(bundle, grid).value


@dataclass(frozen=True)
class CechReport:
    k: int
    zeta: LaurentForm
    decision: CoboundaryDecision
    quadrature: ChernQuadrature
    consistency: MetricConsistency

    @property
    def connection_exists(self) -> bool:
        return self.decision.is_coboundary

    @property
    def consistent(self) -> bool:
        return self.connection_exists == (round(self.quadrature.value) == 0)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "zeta": self.zeta.to_dict(),
            "residue": str(self.zeta.residue),
            "coboundary": self.decision.to_dict(),
            "chern_integral": self.quadrature.to_dict(),
            "metric_consistency": self.consistency.to_dict(),
            "connection_exists": self.connection_exists,
            "consistent": self.consistent,
        }


def analyze(bundle: CechLineBundle, grid: int = DEFAULT_GRID) -> CechReport:
    zeta = zeta_cocycle(bundle)
    report = CechReport(
        k=bundle.k,
        zeta=zeta,
        decision=is_coboundary(zeta),
        quadrature=chern_quadrature(bundle, grid),
        consistency=metric_consistency(bundle),
    )
    logger.info("cech_analyzed", k=bundle.k, connection_exists=report.connection_exists,
                chern=report.quadrature.value)
    return report
