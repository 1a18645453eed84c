"""
BraneGauge Torus Branes

Constant complexes of trivial sheaves on a flat torus C^g/Λ. A gauge field
is ∂ + Σ_k A_k dz_k with constant matrices A^i_k in each degree; the
coframe dz_1, ..., dz_g is orthonormal and the torus has volume 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np
import scipy.linalg
import structlog

from .errors import (
    BraneGaugeError,
    IncompatibleConnectionError,
    InvalidChainMapError,
    MetricError,
    ValidationReport,
)
from .hom import (
    HomElement,
    HomCohomology,
    MatrixComplex,
    hom_cohomology,
    hom_differential,
)
from .linalg import Backend, MatrixAlgebra, get_algebra


logger = structlog.get_logger(__name__)

Curvature = dict[tuple[int, int], Any]


@dataclass(frozen=True)
class TorusContext:
    """Flat torus of complex dimension g with orthonormal coframe and unit volume."""
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise BraneGaugeError(f"torus dimension must be >= 1, got {self.g}")

    @property
    def two_form_indices(self) -> list[tuple[int, int]]:
        return [(k, l) for k in range(self.g) for l in range(k + 1, self.g)]


class ConstantComplex(MatrixComplex):
    """Complex of trivial sheaves O^{r_i} with constant differentials D^i."""

    @classmethod
    def build(cls, algebra: MatrixAlgebra, ranks: Mapping[int, int],
              differentials: Mapping[int, Any] | None = None) -> "ConstantComplex":
        return cls(
            algebra,
            {int(i): int(r) for i, r in ranks.items()},
            {int(i): d for i, d in (differentials or {}).items()},
        )

    @classmethod
    def of(cls, complex_: MatrixComplex) -> "ConstantComplex":
        if isinstance(complex_, cls):
            return complex_
        return cls.build(complex_.algebra, complex_.ranks, complex_.differentials)

    def shifted(self, shift: int) -> "ConstantComplex":
        return ConstantComplex.of(super().shifted(shift))

    def on_float(self, algebra: MatrixAlgebra | None = None) -> "ConstantComplex":
        """The same differentials as complex128 arrays."""
        la = self.algebra
        target = algebra or get_algebra(Backend.FLOAT)
        return ConstantComplex.build(target, self.ranks, {i: la.to_numpy(d) for i, d in self.differentials.items()})


def constant_complex(algebra: MatrixAlgebra, ranks: Mapping[int, int],
                     differentials: Mapping[int, Any] | None = None) -> ConstantComplex:
    return ConstantComplex.build(algebra, ranks, differentials)


@dataclass(frozen=True)
class ConnectionFamily:
    """Per-degree tuples of g matrices A^i_k; absent degrees carry zero matrices."""
    g: int
    matrices: Mapping[int, tuple[Any, ...]]

    def at(self, degree: int, complex_: MatrixComplex) -> tuple[Any, ...]:
        blocks = self.matrices.get(degree)
        if blocks is None:
            r = complex_.rank(degree)
            return tuple(complex_.algebra.zeros(r, r) for _ in range(self.g))
        return blocks

    def as_hom_element(self, complex_: MatrixComplex) -> HomElement:
        return HomElement(0, {p: self.at(p, complex_) for p in complex_.degrees}, self.g)

    @classmethod
    def from_hom_element(cls, element: HomElement) -> "ConnectionFamily":
        return cls(element.slots, dict(element.components))


@dataclass(frozen=True)
class VariationClass:
    """
    Degree-0 cocycle of Hom(F, Ω¹(F)): per degree, g matrices E^i_k.

    ``canonical`` marks the minimum-norm representative of its class.
    """
    g: int
    matrices: Mapping[int, tuple[Any, ...]]
    canonical: bool = False

    def as_family(self) -> ConnectionFamily:
        return ConnectionFamily(self.g, self.matrices)


@dataclass(frozen=True)
class HermitianData:
    """Gram matrices h_i on the cohomology representatives H_i."""
    grams: Mapping[int, Any]


@dataclass(frozen=True)
class CohomologySplitting:
    """
    F^i = H_i ⊕ G_i with H_i = ker D^i ∩ (im D^{i-1})^⊥.

    ``harmonic[i]`` and ``complement[i]`` hold bases as columns;
    ``left_inverse[i]`` satisfies L H = 1 and L G = 0.
    """
    algebra: MatrixAlgebra
    harmonic: Mapping[int, Any]
    complement: Mapping[int, Any]
    left_inverse: Mapping[int, Any]

    def dimension(self, degree: int) -> int:
        h = self.harmonic.get(degree)
        return 0 if h is None else self.algebra.shape(h)[1]

    @property
    def degrees(self) -> list[int]:
        """Degrees with nonzero cohomology."""
        return sorted(i for i in self.harmonic if self.dimension(i) > 0)

    def projector(self, degree: int) -> Any:
        la = self.algebra
        return la.matmul(self.harmonic[degree], self.left_inverse[degree])


# ---------------------------------------------------------------------------
# Connections
# ---------------------------------------------------------------------------

def validate_connection(complex_: MatrixComplex, connection: ConnectionFamily) -> ValidationReport:
    """
    Check shapes and (1 ⊗ D^i) A^i_k = A^{i+1}_k D^i for all i, k.

    Args:
        complex_: Constant complex
        connection: Candidate connection family

    Returns:
        Report listing every violated equation
    """
    report = ValidationReport()
    la = complex_.algebra
    for i, blocks in sorted(connection.matrices.items()):
        r = complex_.rank(i)
        if len(blocks) != connection.g:
            report.errors.append(f"degree {i} has {len(blocks)} matrices, expected g = {connection.g}")
            continue
        for k, a in enumerate(blocks):
            if la.shape(a) != (r, r):
                report.errors.append(f"A^{i}_{k + 1} has shape {la.shape(a)}, expected {(r, r)}")
    if report.errors:
        return report
    for i in complex_.degrees:
        if not complex_.rank(i + 1):
            continue
        d = complex_.differential(i)
        here, there = connection.at(i, complex_), connection.at(i + 1, complex_)
        for k in range(connection.g):
            if not la.equal(la.matmul(d, here[k]), la.matmul(there[k], d)):
                report.errors.append(f"D^{i} A^{i}_{k + 1} != A^{i + 1}_{k + 1} D^{i}")
    return report


def require_compatible(complex_: MatrixComplex, connection: ConnectionFamily) -> None:
    report = validate_connection(complex_, connection)
    if not report.valid:
        raise IncompatibleConnectionError("; ".join(report.errors))


def zero_connection(complex_: MatrixComplex, g: int) -> ConnectionFamily:
    """The connection ∂ itself; every constant complex admits it."""
    la = complex_.algebra
    return ConnectionFamily(g, {
        i: tuple(la.zeros(complex_.rank(i), complex_.rank(i)) for _ in range(g))
        for i in complex_.degrees
    })


def hom_shift(complex_: MatrixComplex, connection: ConnectionFamily,
              homotopy: HomElement) -> ConnectionFamily:
    """∇ + δ_H h for an Ω¹-valued homotopy h ∈ Hom^{-1}(F, F) with g slots."""
    if homotopy.degree != -1 or homotopy.slots != connection.g:
        raise IncompatibleConnectionError("homotopy must have degree -1 and one slot per coframe element")
    la = complex_.algebra
    delta = hom_differential(homotopy, complex_, complex_)
    shifted = {}
    for i in complex_.degrees:
        base = connection.at(i, complex_)
        extra = delta.components.get(i)
        if extra is None:
            shifted[i] = base
        else:
            shifted[i] = tuple(la.add(a, e) for a, e in zip(base, extra))
    return ConnectionFamily(connection.g, shifted)


# ---------------------------------------------------------------------------
# Gauge space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeSpaceBasis:
    """Basis {ξ_a} of Ext^0(F, Ω¹(F)) ordered coframe slot first."""
    endomorphisms: HomCohomology
    basis: list[VariationClass]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def gauge_space_basis(complex_: MatrixComplex, g: int) -> GaugeSpaceBasis:
    """
    Canonical basis of the gauge space.

    The Ω¹ blocks decompose along the coframe, so m = g · dim H^0 Hom(F, F)
    and each basis element is a minimum-norm endomorphism class placed in
    one coframe slot.
    """
    la = complex_.algebra
    endo = hom_cohomology(complex_, complex_, 0)
    basis = []
    for slot in range(g):
        for rep in endo.basis:
            matrices = {}
            for i in complex_.degrees:
                r = complex_.rank(i)
                block = rep.components[i][0] if i in rep.components else la.zeros(r, r)
                matrices[i] = tuple(block if s == slot else la.zeros(r, r) for s in range(g))
            basis.append(VariationClass(g, matrices, canonical=True))
    logger.debug("gauge_space_basis", g=g, endomorphism_classes=endo.dimension, m=len(basis))
    return GaugeSpaceBasis(endomorphisms=endo, basis=basis)


def is_cocycle(complex_: MatrixComplex, variation: VariationClass) -> bool:
    return validate_connection(complex_, variation.as_family()).valid


# ---------------------------------------------------------------------------
# Cohomology and induced connections
# ---------------------------------------------------------------------------

def cohomology_splitting(complex_: MatrixComplex) -> CohomologySplitting:
    """
    Harmonic splitting F^i = H_i ⊕ G_i.

    H_i is the orthogonal projection of ker D^i away from im D^{i-1} and
    G_i = H_i^⊥. Bases are orthonormal on the float backend and exact (not
    orthonormalised) on the exact backend.
    """
    la = complex_.algebra
    harmonic, complement, left = {}, {}, {}
    for i in complex_.degrees:
        cycles = la.kernel_basis(complex_.differential(i))
        boundaries = la.image_basis(complex_.differential(i - 1))
        h = la.quotient_basis(cycles, boundaries)
        harmonic[i] = h
        complement[i] = la.kernel_basis(la.adjoint(h)) if la.shape(h)[1] else la.eye(complex_.rank(i))
        left[i] = la.left_inverse(h)
    return CohomologySplitting(la, harmonic, complement, left)


def _check_preserves(complex_: MatrixComplex, connection: ConnectionFamily) -> None:
    la = complex_.algebra
    for i in complex_.degrees:
        cycles = la.kernel_basis(complex_.differential(i))
        boundaries = la.image_basis(complex_.differential(i - 1))
        rank_b = la.shape(boundaries)[1]
        for k, a in enumerate(connection.at(i, complex_)):
            if not la.is_zero(la.matmul(complex_.differential(i), la.matmul(a, cycles))):
                raise IncompatibleConnectionError(f"A^{i}_{k + 1} does not preserve ker D^{i}")
            if rank_b and la.rank(la.hstack([boundaries, la.matmul(a, boundaries)],
                                            complex_.rank(i))) != rank_b:
                raise IncompatibleConnectionError(f"A^{i}_{k + 1} does not preserve im D^{i - 1}")


def _restrict(split: CohomologySplitting, family: ConnectionFamily,
              complex_: MatrixComplex) -> dict[int, tuple[Any, ...]]:
    la = split.algebra
    return {
        i: tuple(
            la.matmul(split.left_inverse[i], la.matmul(a, split.harmonic[i]))
            for a in family.at(i, complex_)
        )
        for i in split.degrees
    }


def induced_connection(complex_: MatrixComplex, connection: ConnectionFamily,
                       split: CohomologySplitting | None = None) -> dict[int, tuple[Any, ...]]:
    """
    Connections ϑ^i_k = L_H A^i_k H on the cohomology representatives.

    Raises:
        IncompatibleConnectionError: if ∇ is not compatible with D
    """
    require_compatible(complex_, connection)
    _check_preserves(complex_, connection)
    split = split or cohomology_splitting(complex_)
    return _restrict(split, connection, complex_)


def induced_variation(complex_: MatrixComplex, variation: VariationClass,
                      split: CohomologySplitting) -> dict[int, tuple[Any, ...]]:
    """ζ^i(ξ): the variation a cocycle induces on each cohomology degree."""
    return _restrict(split, variation.as_family(), complex_)


def default_metrics(split: CohomologySplitting) -> HermitianData:
    """Metric induced by the standard inner product: h_i = H_i† H_i."""
    la = split.algebra
    return HermitianData({
        i: la.matmul(la.adjoint(split.harmonic[i]), split.harmonic[i]) for i in split.degrees
    })


def validate_metrics(algebra: MatrixAlgebra, metrics: HermitianData) -> None:
    for i, h in metrics.grams.items():
        if not algebra.is_positive_definite(h):
            raise MetricError(f"metric in degree {i} is not Hermitian positive-definite")


# ---------------------------------------------------------------------------
# Curvature
# ---------------------------------------------------------------------------

def curvature(matrices: Sequence[Any], algebra: MatrixAlgebra) -> Curvature:
    """C_kl = [ϑ_k, ϑ_l] for k < l (∂ϑ = 0 for constant matrices)."""
    g = len(matrices)
    return {
        (k, l): algebra.commutator(matrices[k], matrices[l])
        for k in range(g) for l in range(k + 1, g)
    }


def curvature_norm(curv: Curvature, algebra: MatrixAlgebra, h: Any = None) -> Fraction | float:
    """Σ_{k<l} ⟨C_kl, C_kl⟩_h, the Frobenius norm in an h-orthonormal frame."""
    total = 0
    for c in curv.values():
        total = total + algebra.norm_sq(c, h)
    return total


def is_flat(curv: Curvature, algebra: MatrixAlgebra) -> bool:
    return all(algebra.is_zero(c) for c in curv.values())


def phi_trace_form(matrices: Sequence[Any], algebra: MatrixAlgebra) -> Any:
    """Σ_{k<l} tr(C_kl C_kl), bilinear with no conjugation."""
    total = algebra.scalar(0)
    for c in curvature(matrices, algebra).values():
        total = total + algebra.trace(algebra.matmul(c, c))
    return total


def bianchi_residual(matrices: Sequence[Any], algebra: MatrixAlgebra) -> float:
    """max ‖[ϑ_k, C_lm] + [ϑ_l, C_mk] + [ϑ_m, C_kl]‖ over k < l < m."""
    curv = curvature(matrices, algebra)

    def c(a: int, b: int):
        return curv[(a, b)] if a < b else algebra.neg(curv[(b, a)])

    worst = 0.0
    g = len(matrices)
    for k in range(g):
        for l in range(k + 1, g):
            for m in range(l + 1, g):
                total = algebra.add(
                    algebra.add(algebra.commutator(matrices[k], c(l, m)),
                                algebra.commutator(matrices[l], c(m, k))),
                    algebra.commutator(matrices[m], c(k, l)),
                )
                worst = max(worst, float(algebra.norm_sq(total)) ** 0.5)
    return worst


def cohomology_norms(complex_: MatrixComplex, connection: ConnectionFamily,
                     metrics: HermitianData | None = None,
                     split: CohomologySplitting | None = None) -> dict[int, Fraction | float]:
    """‖K_{ϑ^i}‖²_h for every degree with nonzero cohomology."""
    la = complex_.algebra
    split = split or cohomology_splitting(complex_)
    metrics = metrics or default_metrics(split)
    theta = induced_connection(complex_, connection, split)
    return {
        i: curvature_norm(curvature(theta[i], la), la, metrics.grams.get(i))
        for i in split.degrees
    }


def alternating_sum(values: Mapping[int, Any]) -> Any:
    total = 0
    for i, v in values.items():
        total = total + (v if i % 2 == 0 else -v)
    return total


@dataclass(frozen=True)
class EulerPoincareCheck:
    """Termwise versus cohomological alternating sums of Φ."""
    lhs: complex
    rhs: complex
    residual: float
    exact_zero: bool

    def to_dict(self) -> dict:
        return {
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "residual": self.residual,
            "exact_zero": self.exact_zero,
        }


def euler_poincare_check(complex_: MatrixComplex, connection: ConnectionFamily) -> EulerPoincareCheck:
    """
    Σ_i (-1)^i Φ(A^i) against Σ_i (-1)^i Φ(ϑ^i).

    Exactly zero on the exact backend for every compatible family.
    """
    la = complex_.algebra
    theta = induced_connection(complex_, connection)
    lhs = alternating_sum({i: phi_trace_form(connection.at(i, complex_), la) for i in complex_.degrees})
    rhs = alternating_sum({i: phi_trace_form(m, la) for i, m in theta.items()})
    lhs, rhs = la.scalar(lhs), la.scalar(rhs)
    difference = lhs - rhs
    return EulerPoincareCheck(
        lhs=la.to_complex(lhs),
        rhs=la.to_complex(rhs),
        residual=abs(la.to_complex(difference)),
        exact_zero=la.exact and not difference,
    )


# ---------------------------------------------------------------------------
# Metrics on terms
# ---------------------------------------------------------------------------

def to_float(complex_: MatrixComplex, connection: ConnectionFamily,
             algebra: MatrixAlgebra | None = None) -> tuple[ConstantComplex, ConnectionFamily]:
    """Re-express exact data on the float backend."""
    la = complex_.algebra
    complex_f = ConstantComplex.of(complex_).on_float(algebra)
    family = ConnectionFamily(connection.g, {
        i: tuple(la.to_numpy(a) for a in blocks) for i, blocks in connection.matrices.items()
    })
    return complex_f, family


def is_metric_compatible(complex_: MatrixComplex, connection: ConnectionFamily,
                         term_metrics: Mapping[int, Any] | None = None) -> bool:
    """h A + A† h = 0 in every degree and slot."""
    la = complex_.algebra
    for i in complex_.degrees:
        h = term_metrics.get(i) if term_metrics else None
        h = la.eye(complex_.rank(i)) if h is None else h
        for a in connection.at(i, complex_):
            if not la.is_zero(la.add(la.matmul(h, a), la.matmul(la.adjoint(a), h))):
                return False
    return True


def unitary_frame(complex_: MatrixComplex, connection: ConnectionFamily,
                  term_metrics: Mapping[int, Any]) -> tuple[ConstantComplex, ConnectionFamily]:
    """
    Express (F, ∇) in frames orthonormal for per-term metrics h_i = R_i† R_i.

    u' = R u, so D' = R_{i+1} D R_i⁻¹ and A' = R A R⁻¹. Runs on the float
    backend (Cholesky needs square roots).
    """
    source = complex_.algebra
    if source.exact:
        complex_, connection = to_float(complex_, connection)
    la = complex_.algebra
    factors = {}
    for i in complex_.degrees:
        h = term_metrics.get(i)
        if h is None:
            factors[i] = np.eye(complex_.rank(i), dtype=complex)
            continue
        h = np.asarray(h if isinstance(h, np.ndarray) else source.to_numpy(h), dtype=complex)
        if not la.is_positive_definite(h):
            raise MetricError(f"term metric in degree {i} is not Hermitian positive-definite")
        factors[i] = scipy.linalg.cholesky(h, lower=False)
    inverses = {i: scipy.linalg.inv(r) for i, r in factors.items()}
    differentials = {
        i: factors[i + 1] @ d @ inverses[i]
        for i, d in complex_.differentials.items()
        if i in factors and i + 1 in factors
    }
    family = ConnectionFamily(connection.g, {
        i: tuple(factors[i] @ a @ inverses[i] for a in connection.at(i, complex_))
        for i in complex_.degrees
    })
    return constant_complex(la, complex_.ranks, differentials), family


def brane_yang_mills(complex_: MatrixComplex, connection: ConnectionFamily,
                     term_metrics: Mapping[int, Any] | None = None) -> Fraction | float:
    """
    YM = Σ_i (-1)^i ‖K_{ϑ^i}‖² with cohomology metrics induced from the terms.

    Without term metrics the standard inner product is used.
    """
    if term_metrics:
        complex_, connection = unitary_frame(complex_, connection, term_metrics)
    return alternating_sum(cohomology_norms(complex_, connection))


# ---------------------------------------------------------------------------
# Mapping cones
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompatibleMap:
    """Chain map f: (A, α) -> (B, β) with (1 ⊗ f) α = β f; components[i] is B^i x A^i."""
    source: MatrixComplex
    source_connection: ConnectionFamily
    target: MatrixComplex
    target_connection: ConnectionFamily
    components: Mapping[int, Any] = field(default_factory=dict)

    def at(self, degree: int) -> Any:
        f = self.components.get(degree)
        if f is None:
            return self.source.algebra.zeros(self.target.rank(degree), self.source.rank(degree))
        return f


def _map_degrees(f: CompatibleMap) -> list[int]:
    return sorted(set(f.source.degrees) | set(f.target.degrees))


def chain_map_report(f: CompatibleMap) -> ValidationReport:
    """Shapes and D_B f = f D_A."""
    report = ValidationReport()
    la = f.source.algebra
    degrees = _map_degrees(f)
    for i in degrees:
        fi = f.at(i)
        if la.shape(fi) != (f.target.rank(i), f.source.rank(i)):
            report.errors.append(f"f^{i} has shape {la.shape(fi)}")
    if report.errors:
        return report
    for i in degrees:
        left = la.matmul(f.target.differential(i), f.at(i))
        right = la.matmul(f.at(i + 1), f.source.differential(i))
        if not la.equal(left, right):
            report.errors.append(f"D_B f^{i} != f^{i + 1} D_A")
    return report


def intertwining_report(f: CompatibleMap) -> ValidationReport:
    """f α_k = β_k f in every degree; assumes f has the right shapes."""
    report = ValidationReport()
    la = f.source.algebra
    if f.source_connection.g != f.target_connection.g:
        report.errors.append("source and target connections have different g")
        return report
    for i in _map_degrees(f):
        alphas = f.source_connection.at(i, f.source)
        betas = f.target_connection.at(i, f.target)
        for k, (a, b) in enumerate(zip(alphas, betas)):
            if not la.equal(la.matmul(f.at(i), a), la.matmul(b, f.at(i))):
                report.errors.append(f"f^{i} α_{k + 1} != β_{k + 1} f^{i}")
    return report


def validate_compatible_map(f: CompatibleMap) -> ValidationReport:
    report = chain_map_report(f)
    if report.valid:
        report.extend(intertwining_report(f))
    return report


@dataclass(frozen=True)
class ConeResult:
    complex: ConstantComplex
    connection: ConnectionFamily
    metrics: dict[int, Any] | None


def _block_diag(la: MatrixAlgebra, a: Any, b: Any) -> Any:
    (ar, ac), (br, bc) = la.shape(a), la.shape(b)
    return la.block([[a, la.zeros(ar, bc)], [la.zeros(br, ac), b]])


def mapping_cone(f: CompatibleMap, source_metrics: Mapping[int, Any] | None = None,
                 target_metrics: Mapping[int, Any] | None = None) -> ConeResult:
    """
    Cone of a compatible map with its block-diagonal connection.

    C^i = A^{i+1} ⊕ B^i, d_C(a, b) = (D_A a, (-1)^{deg a} f(a) + D_B b),
    ∇(a, b) = (α a, β b), metrics ⟨(a, b), (a', b')⟩ = ⟨a, a'⟩ + ⟨b, b'⟩.

    Raises:
        InvalidChainMapError: if f is not a chain map
        IncompatibleConnectionError: if f does not intertwine α and β
    """
    chain = chain_map_report(f)
    if not chain.valid:
        raise InvalidChainMapError("; ".join(chain.errors))
    intertwining = intertwining_report(f)
    if not intertwining.valid:
        raise IncompatibleConnectionError("; ".join(intertwining.errors))
    a, b = f.source, f.target
    la = a.algebra
    g = f.source_connection.g
    degrees = sorted({i - 1 for i in a.degrees} | set(b.degrees))
    ranks = {i: a.rank(i + 1) + b.rank(i) for i in degrees}
    differentials = {}
    for i in degrees:
        if i + 1 not in ranks:
            continue
        sign = 1 if (i + 1) % 2 == 0 else -1
        differentials[i] = la.block([
            [a.differential(i + 1), la.zeros(a.rank(i + 2), b.rank(i))],
            [la.scale(sign, f.at(i + 1)), b.differential(i)],
        ])
    matrices = {
        i: tuple(
            _block_diag(la, alpha, beta)
            for alpha, beta in zip(f.source_connection.at(i + 1, a), f.target_connection.at(i, b))
        )
        for i in degrees
    }
    metrics = None
    if source_metrics is not None or target_metrics is not None:
        source_metrics, target_metrics = source_metrics or {}, target_metrics or {}
        metrics = {}
        for i in degrees:
            ha = source_metrics.get(i + 1)
            hb = target_metrics.get(i)
            ha = la.eye(a.rank(i + 1)) if ha is None else ha
            hb = la.eye(b.rank(i)) if hb is None else hb
            metrics[i] = _block_diag(la, ha, hb)
    cone_complex = constant_complex(la, ranks, differentials)
    return ConeResult(cone_complex, ConnectionFamily(g, matrices), metrics)
