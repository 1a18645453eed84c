"""
BraneGauge Characteristic Classes

Truncated cohomology rings of P^n and of a torus, Euler characteristic
predictions for flat gauge fields, and a finite Koszul-type check on tori:
with constant sections, Γ(Ω^p ⊗ O^r) = Λ^p(C^g)* ⊗ C^r and the connection
acts by ω ↦ Σ_k A_k dz_k ∧ ω.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Sequence

import structlog
from sympy import Poly, Symbol, exp, series

from .errors import BraneGaugeError, NonFlatConnectionError
from .hom import MatrixComplex, cohomology_dimensions
from .linalg import MatrixAlgebra, to_fraction
from .projective import TwistedComplex
from .torus import curvature, is_flat


logger = structlog.get_logger(__name__)

PROJECTIVE = "projective"
TORUS = "torus"


@dataclass(frozen=True)
class CohRing:
    """
    Cohomology ring of the model, truncated above the top degree.

    For P^n this is Q[h]/(h^{n+1}) with ∫ h^n = 1. For a torus every
    characteristic class of the (trivial) tangent bundle is 1 in degree 0,
    so only degree-0 data survives and the top pairing of such classes is 0.
    """
    model: str
    dim: int

    def __post_init__(self):
        if self.model not in (PROJECTIVE, TORUS):
            raise BraneGaugeError(f"unknown model: {self.model}")
        if self.dim < 1:
            raise BraneGaugeError(f"model dimension must be >= 1, got {self.dim}")

    @property
    def generator(self) -> Symbol:
        return Symbol("h")

    def truncate(self, expr) -> list[Fraction]:
        """Coefficients of 1, h, ..., h^dim of a power series in h."""
        h = self.generator
        if self.model == TORUS:
            constant = series(expr, h, 0, 1).removeO()
            return [to_fraction(constant)] + [Fraction(0)] * self.dim
        poly = Poly(series(expr, h, 0, self.dim + 1).removeO(), h)
        coeffs = [Fraction(0)] * (self.dim + 1)
        for (power,), c in poly.terms():
            if power <= self.dim:
                coeffs[power] = to_fraction(c)
        return coeffs

    def top_pairing(self, coeffs: Sequence[Fraction]) -> Fraction:
        """∫_Y of a class given by its coefficients; only the top degree pairs."""
        if self.model == TORUS:
            return Fraction(0)
        return coeffs[self.dim] if len(coeffs) > self.dim else Fraction(0)

    @property
    def euler_number(self) -> int:
        return self.dim + 1 if self.model == PROJECTIVE else 0

    def todd(self, conjugate: bool = False) -> list[Fraction]:
        """Todd class of TY (or of the conjugate bundle) in the truncated ring."""
        if self.model == TORUS:
            return [Fraction(1)] + [Fraction(0)] * self.dim
        h = self.generator
        x = -h if conjugate else h
        return self.truncate((x / (1 - exp(-x))) ** (self.dim + 1))


@dataclass(frozen=True)
class ChiPrediction:
    chi_omega: int
    chi_a0: Fraction

    def to_dict(self) -> dict:
        return {"chi_omega": self.chi_omega, "chi_a0": str(self.chi_a0)}


def predict_chi(ring: CohRing, r: int) -> ChiPrediction:
    """
    χ(Ω•(F)) = r e(Y) and χ(A^{•,0}(F)) = (-1)^n r ∫ td(Ȳ).

    Raises:
        BraneGaugeError: if r < 1
    """
    if r < 1:
        raise BraneGaugeError(f"rank must be >= 1, got {r}")
    sign = -1 if ring.dim % 2 else 1
    return ChiPrediction(
        chi_omega=r * ring.euler_number,
        chi_a0=sign * r * ring.top_pairing(ring.todd(conjugate=True)),
    )


def todd_top(ring: CohRing) -> tuple[Fraction, Fraction]:
    """Top pairings of td(TY) and td(T̄Y)."""
    return ring.top_pairing(ring.todd()), ring.top_pairing(ring.todd(conjugate=True))


@dataclass(frozen=True)
class ProjectiveDiscrepancy:
    n: int
    r: int
    gamma_chi: int
    index_chi: int

    @property
    def agree(self) -> bool:
        return self.gamma_chi == self.index_chi

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "gamma_chi": self.gamma_chi,
            "index_chi": self.index_chi,
            "agree": self.agree,
        }


def projective_discrepancy(n: int, r: int) -> ProjectiveDiscrepancy:
    """
    Trivial flat O^r on P^n: Σ_p (-1)^p h^{p,0} r = r against r e(P^n) = r(n+1).

    Only h^{0,0} is nonzero on P^n.
    """
    ring = CohRing(PROJECTIVE, n)
    result = ProjectiveDiscrepancy(n, r, gamma_chi=r, index_chi=predict_chi(ring, r).chi_omega)
    if not result.agree:
        logger.info("chi_conventions_disagree", n=n, r=r, gamma_chi=r, index_chi=result.index_chi)
    return result


def chern_character(complex_: TwistedComplex) -> list[Fraction]:
    """ch = Σ_p (-1)^p Σ_i e^{k_pi h} in Q[h]/(h^{n+1})."""
    ring = CohRing(PROJECTIVE, complex_.n)
    h = ring.generator
    total = 0
    for p in complex_.degrees:
        sign = 1 if p % 2 == 0 else -1
        for twist in complex_.twists(p):
            total += sign * exp(twist * h)
    if total == 0:
        return [Fraction(0)] * (complex_.n + 1)
    return ring.truncate(total)


def first_chern_class(complex_: TwistedComplex, degree: int) -> int:
    return sum(complex_.twists(degree))


# ---------------------------------------------------------------------------
# Torus check
# ---------------------------------------------------------------------------

def koszul_complex(matrices: Sequence[Any], algebra: MatrixAlgebra) -> MatrixComplex:
    """
    Global sections Λ^p(C^g)* ⊗ C^r with d(dz_S ⊗ v) = Σ_k dz_k ∧ dz_S ⊗ A_k v.

    Subsets S are ordered by ``itertools.combinations``; moving dz_k past
    the smaller indices of S contributes (-1)^{#{s ∈ S: s < k}}.
    """
    g = len(matrices)
    r = algebra.shape(matrices[0])[0] if g else 0
    subsets = {p: list(combinations(range(g), p)) for p in range(g + 1)}
    ranks = {p: r * len(subsets[p]) for p in range(g + 1)}
    differentials = {}
    for p in range(g):
        index = {s: i for i, s in enumerate(subsets[p + 1])}
        grid = [[algebra.zeros(r, r) for _ in subsets[p]] for _ in subsets[p + 1]]
        for col, s in enumerate(subsets[p]):
            for k in range(g):
                if k in s:
                    continue
                sign = -1 if sum(1 for x in s if x < k) % 2 else 1
                target = tuple(sorted(s + (k,)))
                grid[index[target]][col] = algebra.scale(sign, matrices[k])
        differentials[p] = algebra.block(grid)
    return MatrixComplex(algebra, ranks, differentials)


@dataclass(frozen=True)
class TorusChiCheck:
    g: int
    r: int
    naive_chi: int
    cohomological_chi: int
    prediction: int
    cohomology: dict[int, int]

    @property
    def agrees(self) -> bool:
        return self.naive_chi == self.cohomological_chi == self.prediction

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "r": self.r,
            "naive_chi": self.naive_chi,
            "cohomological_chi": self.cohomological_chi,
            "prediction": self.prediction,
            "cohomology": {str(p): d for p, d in self.cohomology.items()},
            "agrees": self.agrees,
        }


def torus_chi_check(g: int, r: int, matrices: Sequence[Any], algebra: MatrixAlgebra) -> TorusChiCheck:
    """
    Compare Σ_p (-1)^p dim Γ(Ω^p ⊗ O^r) with the Euler characteristic of the
    Koszul-type complex and with the prediction r e(T) = 0.

    Raises:
        NonFlatConnectionError: if some [A_k, A_l] is nonzero
    """
    if len(matrices) != g:
        raise BraneGaugeError(f"expected {g} connection matrices, got {len(matrices)}")
    for a in matrices:
        if algebra.shape(a) != (r, r):
            raise BraneGaugeError(f"connection matrix has shape {algebra.shape(a)}, expected {(r, r)}")
    if not is_flat(curvature(matrices, algebra), algebra):
        raise NonFlatConnectionError("connection matrices do not commute")
    complex_ = koszul_complex(matrices, algebra)
    dims = cohomology_dimensions(complex_) if r else {}
    naive = sum((-1) ** p * r * comb(g, p) for p in range(g + 1))
    cohomological = sum((-1) ** p * d for p, d in dims.items())
    prediction = predict_chi(CohRing(TORUS, g), r).chi_omega if r else 0
    logger.debug("torus_chi_check", g=g, r=r, naive=naive, cohomological=cohomological)
    return TorusChiCheck(g, r, naive, cohomological, prediction, dims)
