"""
BraneGauge Polynomials

Sparse real polynomials in the real coordinates (Re λ_a, Im λ_a) of gauge
parameters. Variable 2a is Re λ_a and variable 2a+1 is Im λ_a.

Coefficients are Fractions (exact backend) or floats (float backend).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np
from sympy import I
from sympy.polys.rings import PolyRing

from .linalg import to_fraction

Coefficient = Union[Fraction, float]
Monomial = tuple[int, ...]


def _is_zero(c: Coefficient) -> bool:
    return c == 0


@dataclass(frozen=True)
class RealPoly:
    """
    Real polynomial stored as exponent vector -> coefficient.

    Zero coefficients are never stored.
    """
    nvars: int
    terms: Mapping[Monomial, Coefficient] = field(default_factory=dict)

    def __post_init__(self):
        cleaned = {}
        for monom, coeff in self.terms.items():
            monom = tuple(int(e) for e in monom)
            if len(monom) != self.nvars:
                raise ValueError(f"exponent vector {monom} has length != {self.nvars}")
            if not _is_zero(coeff):
                cleaned[monom] = coeff
        object.__setattr__(self, "terms", cleaned)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "RealPoly":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: Coefficient) -> "RealPoly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int, coeff: Coefficient = 1) -> "RealPoly":
        monom = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {monom: coeff})

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def total_degree(self) -> int:
        """Max total degree over stored terms (0 for the zero polynomial)."""
        return max((sum(m) for m in self.terms), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RealPoly):
            return NotImplemented
        return self.nvars == other.nvars and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "RealPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "RealPoly") -> "RealPoly":
        self._check(other)
        terms = dict(self.terms)
        for monom, coeff in other.terms.items():
            terms[monom] = terms.get(monom, 0) + coeff
        return RealPoly(self.nvars, terms)

    def __neg__(self) -> "RealPoly":
        return RealPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "RealPoly") -> "RealPoly":
        return self + (-other)

    def __mul__(self, other: Union["RealPoly", Coefficient, int]) -> "RealPoly":
        if not isinstance(other, RealPoly):
            return RealPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        self._check(other)
        terms: dict[Monomial, Coefficient] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                monom = tuple(a + b for a, b in zip(m1, m2))
                terms[monom] = terms.get(monom, 0) + c1 * c2
        return RealPoly(self.nvars, terms)

    __rmul__ = __mul__

    def partial(self, index: int) -> "RealPoly":
        """Partial derivative with respect to variable ``index``."""
        terms: dict[Monomial, Coefficient] = {}
        for monom, coeff in self.terms.items():
            power = monom[index]
            if power:
                lowered = monom[:index] + (power - 1,) + monom[index + 1:]
                terms[lowered] = terms.get(lowered, 0) + coeff * power
        return RealPoly(self.nvars, terms)

    def gradient(self) -> list["RealPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    def hessian(self) -> list[list["RealPoly"]]:
        grad = self.gradient()
        return [[g.partial(j) for j in range(self.nvars)] for g in grad]

    # -- evaluation -------------------------------------------------------

    def evaluate(self, point: Sequence) -> Coefficient:
        """
        Evaluate at a point given in the polynomial's own coefficient type.

        Fraction points on Fraction coefficients evaluate exactly.
        """
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = 0
        for monom, coeff in self.terms.items():
            value = coeff
            for x, power in zip(point, monom):
                if power:
                    value = value * x ** power
            total = total + value
        return total

    def compile(self) -> Callable[[np.ndarray], float]:
        """Vectorised float evaluator ``f(x)`` for ``x`` of shape (nvars,) or (N, nvars)."""
        if not self.terms:
            return lambda x: np.zeros(np.asarray(x).shape[:-1]) if np.ndim(x) > 1 else 0.0
        exponents = np.array(list(self.terms.keys()), dtype=float).reshape(len(self.terms), self.nvars)
        coeffs = np.array([float(c) for c in self.terms.values()], dtype=float)

        def evaluate(x: np.ndarray) -> np.ndarray | float:
            x = np.asarray(x, dtype=float)
            monomials = np.prod(x[..., None, :] ** exponents, axis=-1)
            return monomials @ coeffs

        return evaluate

    def to_float(self) -> "RealPoly":
        return RealPoly(self.nvars, {m: float(c) for m, c in self.terms.items()})

    def to_dict(self) -> dict:
        """JSON-friendly form: list of [coefficient, exponents]."""
        def fmt(c):
            return str(c) if isinstance(c, Fraction) else float(c)

        return {
            "nvars": self.nvars,
            "terms": [[fmt(c), list(m)] for m, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_ring_element(cls, element, nvars: int, exact: bool) -> "RealPoly":
        """
        Real part of a sympy ring element over ``QQ_I`` or ``CC``.

        Raises:
            ValueError: if an exact coefficient has a nonzero imaginary part
        """
        terms: dict[Monomial, Coefficient] = {}
        for monom, coeff in element.items():
            if exact:
                if coeff.y != 0:
                    raise ValueError("polynomial is not real")
                terms[tuple(monom)] = to_fraction(coeff.x)
            else:
                terms[tuple(monom)] = float(coeff.real)
        return cls(nvars, terms)


def lambda_ring(m: int, domain) -> tuple[PolyRing, list, list]:
    """
    Ring in the 2m real coordinates of λ ∈ C^m with complex coefficients.

    Returns:
        (ring, lambdas, conjugates) with λ_a = x_a + i y_a and its conjugate
    """
    names = [f"{prefix}{a}" for a in range(m) for prefix in ("x", "y")]
    ring = PolyRing(names, domain)
    unit = ring.domain.from_sympy(I)
    lambdas, conjugates = [], []
    for a in range(m):
        x, y = ring.gens[2 * a], ring.gens[2 * a + 1]
        lambdas.append(x + y * unit)
        conjugates.append(x - y * unit)
    return ring, lambdas, conjugates


def poly_wirtinger_gradient(poly: RealPoly) -> list[RealPoly]:
    """
    Real gradient (∂P/∂Re λ_a, ∂P/∂Im λ_a) of a real polynomial.

    The complex Wirtinger derivative ∂P/∂λ̄_a is half of
    ∂P/∂Re λ_a + i ∂P/∂Im λ_a; for real P its vanishing is equivalent to the
    vanishing of both real partials.

    Args:
        poly: Real polynomial in 2m variables

    Returns:
        2m polynomials, each of total degree at most deg(P) - 1
    """
    return poly.gradient()


def wirtinger_at(poly: RealPoly, point: Sequence[float]) -> list[complex]:
    """Values of ∂P/∂λ̄_a at a real point (x_0, y_0, x_1, y_1, ...)."""
    grad = [g.compile() for g in poly.gradient()]
    x = np.asarray(point, dtype=float)
    return [
        0.5 * complex(float(grad[2 * a](x)), float(grad[2 * a + 1](x)))
        for a in range(poly.nvars // 2)
    ]


def sum_polys(polys: Iterable[RealPoly], nvars: int) -> RealPoly:
    total = RealPoly.zero(nvars)
    for p in polys:
        total = total + p
    return total
