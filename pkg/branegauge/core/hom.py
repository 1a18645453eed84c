"""
BraneGauge Hom Complex

Bounded complexes of finite-dimensional vector spaces with matrix
differentials, and the Hom complex between two of them:

    Hom^m(A, B) = ∏_p Hom(A^p, B^{p+m})
    (δ_H g)^p   = d_B^{p+m} g^p + (-1)^{m+1} g^{p+1} d_A^p

Ω¹-valued Hom elements carry ``slots`` parallel blocks per position, one per
coframe element; δ_H acts on each slot independently.
"""

from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import DimensionMismatchError, InvalidComplexError, ValidationReport
from .linalg import MatrixAlgebra


@dataclass(frozen=True)
class MatrixComplex:
    """
    Bounded complex of vector spaces C^p = (backend scalars)^{ranks[p]}.

    ``differentials[p]`` is the ranks[p+1] x ranks[p] matrix of d^p. Missing
    differentials are zero.
    """
    algebra: MatrixAlgebra
    ranks: Mapping[int, int]
    differentials: Mapping[int, Any] = field(default_factory=dict)

    def rank(self, p: int) -> int:
        return self.ranks.get(p, 0)

    @property
    def degrees(self) -> list[int]:
        """Degrees with nonzero terms, ascending."""
        return sorted(p for p, r in self.ranks.items() if r > 0)

    def differential(self, p: int) -> Any:
        d = self.differentials.get(p)
        if d is None:
            return self.algebra.zeros(self.rank(p + 1), self.rank(p))
        return d

    def validate(self) -> ValidationReport:
        """Check differential shapes and d^{p+1} d^p = 0."""
        report = ValidationReport()
        la = self.algebra
        for p, r in sorted(self.ranks.items()):
            if r < 0:
                report.errors.append(f"negative rank {r} in degree {p}")
        for p, d in sorted(self.differentials.items()):
            expected = (self.rank(p + 1), self.rank(p))
            if la.shape(d) != expected:
                report.errors.append(
                    f"differential d^{p} has shape {la.shape(d)}, expected {expected}"
                )
        if report.errors:
            return report
        for p in sorted(self.differentials):
            if p + 1 in self.differentials:
                if not la.is_zero(la.matmul(self.differential(p + 1), self.differential(p))):
                    report.errors.append(f"d^{p + 1} d^{p} is not zero")
        return report

    def require_valid(self) -> None:
        report = self.validate()
        if not report.valid:
            raise InvalidComplexError("; ".join(report.errors))

    def shifted(self, shift: int) -> "MatrixComplex":
        """C[l]^p = C^{p+l}, differentials multiplied by (-1)^l."""
        la = self.algebra
        sign = -1 if shift % 2 else 1
        return MatrixComplex(
            la,
            {p - shift: r for p, r in self.ranks.items()},
            {p - shift: la.scale(sign, d) for p, d in self.differentials.items()},
        )


def cohomology_dimensions(complex_: MatrixComplex) -> dict[int, int]:
    """dim H^p = dim C^p - rank d^p - rank d^{p-1} for every nonzero degree."""
    la = complex_.algebra
    return {
        p: complex_.rank(p) - la.rank(complex_.differential(p)) - la.rank(complex_.differential(p - 1))
        for p in complex_.degrees
    }


@dataclass(frozen=True)
class HomElement:
    """
    Element of Hom^m(A, B).

    ``components[p]`` is a tuple of ``slots`` matrices A^p -> B^{p+m}; absent
    positions are zero.
    """
    degree: int
    components: Mapping[int, tuple[Any, ...]]
    slots: int = 1

    def block(self, p: int, slot: int, algebra: MatrixAlgebra, source: MatrixComplex,
              target: MatrixComplex) -> Any:
        blocks = self.components.get(p)
        if blocks is None:
            return algebra.zeros(target.rank(p + self.degree), source.rank(p))
        return blocks[slot]


@dataclass(frozen=True)
class HomSpace:
    """Coordinates on Hom^m(A, B): positions, block shapes and slot count."""
    source: MatrixComplex
    target: MatrixComplex
    degree: int
    slots: int = 1

    @property
    def positions(self) -> list[int]:
        return [
            p for p in self.source.degrees
            if self.target.rank(p + self.degree) > 0
        ]

    @property
    def shapes(self) -> list[tuple[int, int]]:
        shapes = []
        for p in self.positions:
            shape = (self.target.rank(p + self.degree), self.source.rank(p))
            shapes.extend([shape] * self.slots)
        return shapes

    @property
    def dimension(self) -> int:
        return sum(r * c for r, c in self.shapes)

    def flatten(self, element: HomElement) -> Any:
        la = self.source.algebra
        blocks = [
            element.block(p, s, la, self.source, self.target)
            for p in self.positions for s in range(self.slots)
        ]
        return la.flatten(blocks)

    def unflatten(self, column: Any) -> HomElement:
        la = self.source.algebra
        blocks = la.unflatten(column, self.shapes)
        components = {}
        for i, p in enumerate(self.positions):
            components[p] = tuple(blocks[i * self.slots:(i + 1) * self.slots])
        return HomElement(self.degree, components, self.slots)

    def zero(self) -> HomElement:
        return self.unflatten(self.source.algebra.zeros(self.dimension, 1))

    def basis(self) -> list[HomElement]:
        """Unit elements, in flattening order."""
        eye = self.source.algebra.eye(self.dimension)
        return [self.unflatten(col) for col in self.source.algebra.columns(eye)]


def _check_element(x: HomElement, source: MatrixComplex, target: MatrixComplex) -> None:
    la = source.algebra
    for p, blocks in x.components.items():
        if len(blocks) != x.slots:
            raise DimensionMismatchError(f"position {p} has {len(blocks)} blocks, expected {x.slots}")
        expected = (target.rank(p + x.degree), source.rank(p))
        for b in blocks:
            if la.shape(b) != expected:
                raise DimensionMismatchError(
                    f"block at position {p} has shape {la.shape(b)}, expected {expected}"
                )


def hom_differential(x: HomElement, source: MatrixComplex, target: MatrixComplex) -> HomElement:
    """
    Apply δ_H to a Hom element.

    Args:
        x: Element of Hom^m(source, target)
        source: Complex A (its differentials are d_A)
        target: Complex B (its differentials are d_B)

    Returns:
        Element of Hom^{m+1}(source, target)

    Raises:
        DimensionMismatchError: if a block does not map A^p to B^{p+m}
    """
    _check_element(x, source, target)
    la = source.algebra
    m = x.degree
    sign = 1 if (m + 1) % 2 == 0 else -1
    result = HomSpace(source, target, m + 1, x.slots)
    components = {}
    for p in result.positions:
        blocks = []
        for s in range(x.slots):
            left = la.matmul(target.differential(p + m), x.block(p, s, la, source, target))
            right = la.matmul(x.block(p + 1, s, la, source, target), source.differential(p))
            blocks.append(la.add(left, la.scale(sign, right)))
        components[p] = tuple(blocks)
    return HomElement(m + 1, components, x.slots)


def hom_is_zero(x: HomElement, algebra: MatrixAlgebra) -> bool:
    return all(algebra.is_zero(b) for blocks in x.components.values() for b in blocks)


def differential_matrix(source: MatrixComplex, target: MatrixComplex, degree: int,
                        slots: int = 1) -> Any:
    """Matrix of δ_H: Hom^m -> Hom^{m+1} in flattened coordinates."""
    la = source.algebra
    domain = HomSpace(source, target, degree, slots)
    codomain = HomSpace(source, target, degree + 1, slots)
    columns = [codomain.flatten(hom_differential(e, source, target)) for e in domain.basis()]
    return la.hstack(columns, codomain.dimension)


@dataclass(frozen=True)
class CohomologyResult:
    """Dimensions and coset representatives of ker d_curr / im d_prev."""
    dimension: int
    cocycle_dimension: int
    coboundary_dimension: int
    representatives: Any  # matrix, one representative per column

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "cocycle_dimension": self.cocycle_dimension,
            "coboundary_dimension": self.coboundary_dimension,
        }


def cohomology_from_differentials(algebra: MatrixAlgebra, d_prev: Any, d_curr: Any) -> CohomologyResult:
    """
    Cohomology at the middle of U --d_prev--> V --d_curr--> W.

    Representatives are minimum-norm coset elements.
    """
    cocycles = algebra.kernel_basis(d_curr)
    coboundaries = algebra.image_basis(d_prev)
    representatives = algebra.quotient_basis(cocycles, coboundaries)
    z = algebra.shape(cocycles)[1]
    b = algebra.shape(coboundaries)[1]
    return CohomologyResult(
        dimension=algebra.shape(representatives)[1],
        cocycle_dimension=z,
        coboundary_dimension=b,
        representatives=representatives,
    )


@dataclass(frozen=True)
class HomCohomology:
    """H^m of the Hom complex with representatives as Hom elements."""
    result: CohomologyResult
    basis: list[HomElement]

    @property
    def dimension(self) -> int:
        return self.result.dimension


def hom_cohomology(source: MatrixComplex, target: MatrixComplex, degree: int,
                   slots: int = 1) -> HomCohomology:
    """
    Basis of H^m Hom•(source, target).

    Args:
        source: Complex A
        target: Complex B
        degree: m
        slots: Parallel blocks per position (g for Ω¹-valued elements)

    Returns:
        Dimensions plus canonical (minimum-norm) representatives
    """
    la = source.algebra
    d_prev = differential_matrix(source, target, degree - 1, slots)
    d_curr = differential_matrix(source, target, degree, slots)
    result = cohomology_from_differentials(la, d_prev, d_curr)
    space = HomSpace(source, target, degree, slots)
    basis = [space.unflatten(col) for col in la.columns(result.representatives)]
    return HomCohomology(result=result, basis=basis)

