"""
BraneGauge Yang-Mills Functional

For a constant complex F on a torus, a base connection ∇̃ and a basis ξ_a of
the gauge space, the gauge fields ∇̃ + Σ_a λ_a ξ_a induce connections ϑ^i(λ)
on the cohomology representatives, and

    YM(λ) = Σ_i (-1)^i ‖K_{ϑ^i(λ)}‖²_{h_i} = Σ_i (-1)^i P^i(λ)

with each P^i a real polynomial of degree at most 4 in (Re λ, Im λ).
Critical points are found by seeded Newton multistart.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Mapping, Sequence

import numpy as np
import scipy.linalg
import structlog
from sympy import CC, QQ_I

from .errors import (
    BezoutBoundError,
    DegreeBoundError,
    DimensionMismatchError,
    MetricError,
    ValidationReport,
)
from .hom import HomSpace, differential_matrix
from .polynomials import RealPoly, lambda_ring, sum_polys
from .torus import (
    CohomologySplitting,
    ConnectionFamily,
    ConstantComplex,
    HermitianData,
    VariationClass,
    cohomology_splitting,
    curvature,
    curvature_norm,
    default_metrics,
    gauge_space_basis,
    induced_connection,
    induced_variation,
    validate_connection,
)


logger = structlog.get_logger(__name__)

DEFAULT_SEEDS = 200
DEFAULT_SEED = 42
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100
DEFAULT_BOX = 3.0
CLUSTER_RADIUS = 1e-6
HESSIAN_RANK_TOL = 1e-6
MAX_EQUATION_DEGREE = 3


def to_real_point(lam: Sequence[complex]) -> np.ndarray:
    """(λ_0, λ_1, ...) -> (Re λ_0, Im λ_0, Re λ_1, Im λ_1, ...)."""
    values = [complex(v) for v in lam]
    return np.array([part for v in values for part in (v.real, v.imag)], dtype=float)


def to_complex_point(x: Sequence[float]) -> tuple[complex, ...]:
    return tuple(complex(x[2 * a], x[2 * a + 1]) for a in range(len(x) // 2))


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PreparedInstance:
    """Splitting, metrics and induced data shared by every evaluation."""
    split: CohomologySplitting
    grams: Mapping[int, Any]
    theta: Mapping[int, tuple[Any, ...]]
    zeta: list[Mapping[int, tuple[Any, ...]]]


@dataclass(frozen=True)
class YMInstance:
    """
    Family ψ = ψ̃ + Σ_a λ_a ξ_a of gauge fields on a constant complex.

    ``metrics`` are Gram matrices on the cohomology representatives; when
    omitted the metrics induced by the standard inner product are used.
    """
    complex: ConstantComplex
    base: ConnectionFamily
    basis: list[VariationClass]
    metrics: HermitianData | None = None

    @property
    def m(self) -> int:
        return len(self.basis)

    @property
    def g(self) -> int:
        return self.base.g

    @property
    def algebra(self):
        return self.complex.algebra

    @property
    def signs(self) -> dict[int, int]:
        return {i: 1 if i % 2 == 0 else -1 for i in self.prepared.split.degrees}

    def validate(self) -> ValidationReport:
        """Base compatible, basis cocycles, basis independent modulo coboundaries."""
        report = self.complex.validate()
        if not report.valid:
            return report
        report.extend(validate_connection(self.complex, self.base))
        for a, xi in enumerate(self.basis):
            if xi.g != self.g:
                report.errors.append(f"basis element {a} has g = {xi.g}, expected {self.g}")
                continue
            sub = validate_connection(self.complex, xi.as_family())
            report.errors.extend(f"basis element {a}: {e}" for e in sub.errors)
        if report.errors or not self.basis:
            return report
        la = self.algebra
        space = HomSpace(self.complex, self.complex, 0, self.g)
        coboundaries = la.image_basis(differential_matrix(self.complex, self.complex, -1, self.g))
        columns = [space.flatten(xi.as_family().as_hom_element(self.complex)) for xi in self.basis]
        stacked = la.hstack([coboundaries] + columns, space.dimension)
        if la.rank(stacked) != la.shape(coboundaries)[1] + self.m:
            report.errors.append("basis is not linearly independent modulo coboundaries")
        return report

    @cached_property
    def prepared(self) -> PreparedInstance:
        split = cohomology_splitting(self.complex)
        metrics = self.metrics or default_metrics(split)
        la = self.algebra
        for i in split.degrees:
            h = metrics.grams.get(i)
            if h is None:
                raise MetricError(f"no cohomology metric for degree {i}")
            if la.shape(h) != (split.dimension(i), split.dimension(i)):
                raise DimensionMismatchError(
                    f"metric in degree {i} has shape {la.shape(h)}, expected H^{i} of dimension {split.dimension(i)}"
                )
            if not la.is_positive_definite(h):
                raise MetricError(f"metric in degree {i} is not Hermitian positive-definite")
        theta = induced_connection(self.complex, self.base, split)
        zeta = [induced_variation(self.complex, xi, split) for xi in self.basis]
        return PreparedInstance(split, dict(metrics.grams), theta, zeta)


def canonical_instance(complex_: ConstantComplex, base: ConnectionFamily,
                       metrics: HermitianData | None = None) -> YMInstance:
    """Instance over the canonical gauge-space basis of ``complex_``."""
    basis = gauge_space_basis(complex_, base.g).basis
    return YMInstance(complex_, base, basis, metrics)


def theta_at(instance: YMInstance, lam: Sequence[Any]) -> dict[int, tuple[Any, ...]]:
    """ϑ^i(λ)_k = ϑ̃^i_k + Σ_a λ_a ζ^i_{a,k}."""
    if len(lam) != instance.m:
        raise DimensionMismatchError(f"expected {instance.m} parameters, got {len(lam)}")
    la = instance.algebra
    prep = instance.prepared
    result = {}
    for i, base in prep.theta.items():
        blocks = list(base)
        for a, value in enumerate(lam):
            c = la.scalar(value)
            for k in range(instance.g):
                blocks[k] = la.add(blocks[k], la.scale(c, prep.zeta[a][i][k]))
        result[i] = tuple(blocks)
    return result


# ---------------------------------------------------------------------------
# Polynomial assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YMPolynomialSet:
    """Per-degree P^i in the 2m real coordinates of λ."""
    m: int
    per_degree: Mapping[int, RealPoly]

    @property
    def nvars(self) -> int:
        return 2 * self.m

    @property
    def total(self) -> RealPoly:
        return sum_polys(
            (p if i % 2 == 0 else -p for i, p in self.per_degree.items()), self.nvars
        )

    def degree_values(self, x: Sequence[float]) -> dict[int, float]:
        x = np.asarray(x, dtype=float)
        return {i: float(p.compile()(x)) for i, p in self.per_degree.items()}

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "per_degree": {str(i): p.to_dict() for i, p in self.per_degree.items()},
            "total": self.total.to_dict(),
        }


def _expansion(theta: tuple[Any, ...], zetas: list[tuple[Any, ...]], k: int, l: int,
               la, ring, lambdas, conjugates) -> list[tuple[Any, Any, Any]]:
    """(μ, μ̄, M) with [ϑ_k(λ), ϑ_l(λ)] = Σ μ M."""
    m = len(zetas)
    terms = [(ring.one, ring.one, la.commutator(theta[k], theta[l]))]
    for a in range(m):
        linear = la.add(la.commutator(theta[k], zetas[a][l]), la.commutator(zetas[a][k], theta[l]))
        terms.append((lambdas[a], conjugates[a], linear))
    for a in range(m):
        for b in range(a, m):
            if a == b:
                quad = la.commutator(zetas[a][k], zetas[a][l])
            else:
                quad = la.add(la.commutator(zetas[a][k], zetas[b][l]),
                              la.commutator(zetas[b][k], zetas[a][l]))
            terms.append((lambdas[a] * lambdas[b], conjugates[a] * conjugates[b], quad))
    return [t for t in terms if not la.is_zero(t[2])]


def assemble(instance: YMInstance) -> YMPolynomialSet:
    """
    Expand every P^i(λ) = ‖K_{ϑ^i(λ)}‖²_{h_i} symbolically.

    K_{ϑ(λ)} is a matrix polynomial of degree 2 in λ; its norm pairs each
    monomial μ_s with the conjugate of every μ_t.

    Args:
        instance: Validated instance

    Returns:
        Real polynomials with Fraction coefficients on the exact backend and
        float coefficients on the float backend
    """
    la = instance.algebra
    prep = instance.prepared
    m = instance.m
    nvars = 2 * m
    per_degree: dict[int, RealPoly] = {}
    if m == 0:
        for i, theta in prep.theta.items():
            value = curvature_norm(curvature(theta, la), la, prep.grams[i])
            per_degree[i] = RealPoly.constant(0, value)
        return YMPolynomialSet(0, per_degree)

    ring, lambdas, conjugates = lambda_ring(m, QQ_I if la.exact else CC)
    for i, theta in prep.theta.items():
        h = prep.grams[i]
        zetas = [prep.zeta[a][i] for a in range(m)]
        total = ring.zero
        for k in range(instance.g):
            for l in range(k + 1, instance.g):
                terms = _expansion(theta, zetas, k, l, la, ring, lambdas, conjugates)
                for mu_s, _, ms in terms:
                    for _, mu_t_bar, mt in terms:
                        pairing = la.metric_inner(ms, mt, h)
                        if la.is_zero_scalar(pairing):
                            continue
                        total = total + mu_s * mu_t_bar * ring.domain_new(pairing)
        per_degree[i] = RealPoly.from_ring_element(total, nvars, la.exact)
    logger.debug(
        "ym_assembled",
        m=m,
        degrees=sorted(per_degree),
        max_degree=max((p.total_degree() for p in per_degree.values()), default=0),
    )
    return YMPolynomialSet(m, per_degree)


@dataclass(frozen=True)
class YMEvaluation:
    """Direct evaluation of the functional at one λ."""
    point: tuple[complex, ...]
    per_degree: dict[int, Fraction | float]
    flat: dict[int, bool]

    @property
    def total(self) -> Fraction | float:
        value = 0
        for i, v in self.per_degree.items():
            value = value + (v if i % 2 == 0 else -v)
        return value

    def to_dict(self) -> dict:
        return {
            "lambda": [[z.real, z.imag] for z in self.point],
            "per_degree": {str(i): float(v) for i, v in self.per_degree.items()},
            "total": float(self.total),
            "flat": {str(i): f for i, f in self.flat.items()},
        }


def evaluate(instance: YMInstance, lam: Sequence[Any], tol: float = 0.0) -> YMEvaluation:
    """P^i(λ) computed from the curvatures of ϑ^i(λ), not from the polynomials."""
    la = instance.algebra
    prep = instance.prepared
    theta = theta_at(instance, lam)
    values = {
        i: curvature_norm(curvature(blocks, la), la, prep.grams[i])
        for i, blocks in theta.items()
    }
    return YMEvaluation(
        point=tuple(complex(la.to_complex(la.scalar(v))) for v in lam),
        per_degree=values,
        flat={i: float(v) <= tol for i, v in values.items()},
    )


# ---------------------------------------------------------------------------
# Stationarity and solving
# ---------------------------------------------------------------------------

def stationarity_system(polys: YMPolynomialSet, mode: str = "total") -> list[RealPoly]:
    """
    Real gradient equations of the functional.

    ``total`` differentiates the alternating sum (2m equations); ``per_degree``
    differentiates each P^i separately (2m equations per nonzero degree).
    Identically zero equations are dropped, so a constant functional yields
    an empty system.

    Raises:
        DegreeBoundError: if an equation has degree above 3
        ValueError: on an unknown mode
    """
    if mode == "total":
        sources = [polys.total]
    elif mode == "per_degree":
        sources = [polys.per_degree[i] for i in sorted(polys.per_degree)]
    else:
        raise ValueError(f"unknown stationarity mode: {mode}")
    equations = [eq for p in sources for eq in p.gradient() if not eq.is_zero]
    for eq in equations:
        if eq.total_degree() > MAX_EQUATION_DEGREE:
            raise DegreeBoundError(f"stationarity equation of degree {eq.total_degree()}")
    return equations


@dataclass(frozen=True)
class CriticalPoint:
    """One cluster of converged Newton starts."""
    cluster_id: int
    point: tuple[complex, ...]
    residual: float
    hessian_rank: int
    members: int = 1
    ym_value: float | None = None
    degree_values: dict[int, float] = field(default_factory=dict)
    flat: dict[int, bool] = field(default_factory=dict)

    @property
    def isolated(self) -> bool:
        return self.hessian_rank == 2 * len(self.point)

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "lambda": [[z.real, z.imag] for z in self.point],
            "residual": self.residual,
            "hessian_rank": self.hessian_rank,
            "isolated": self.isolated,
            "members": self.members,
            "ym_value": self.ym_value,
            "degree_values": {str(i): v for i, v in self.degree_values.items()},
            "flat": {str(i): f for i, f in self.flat.items()},
        }


@dataclass(frozen=True)
class StartFailure:
    start: int
    reason: str

    def to_dict(self) -> dict:
        return {"start": self.start, "reason": self.reason}


@dataclass(frozen=True)
class SolveResult:
    """Clusters in canonical order plus per-start failures."""
    clusters: list[CriticalPoint]
    failures: list[StartFailure]
    starts: int
    all_critical: bool = False

    def to_dict(self) -> dict:
        return {
            "all_critical": self.all_critical,
            "starts": self.starts,
            "clusters": [c.to_dict() for c in self.clusters],
            "failures": [f.to_dict() for f in self.failures],
        }


class _CompiledSystem:
    """Equations and Jacobian as coefficient arrays over one shared monomial list."""

    def __init__(self, system: Sequence[RealPoly], nvars: int):
        self.nvars = nvars
        partials = [[eq.partial(v) for v in range(nvars)] for eq in system]
        monomials = sorted(
            {m for eq in system for m in eq.terms}
            | {m for row in partials for p in row for m in p.terms}
        )
        index = {m: j for j, m in enumerate(monomials)}
        self.exponents = np.array(monomials, dtype=float).reshape(len(monomials), nvars)
        self.values = np.zeros((len(system), len(monomials)))
        self.jacobian = np.zeros((len(system), nvars, len(monomials)))
        for e, eq in enumerate(system):
            for m, c in eq.terms.items():
                self.values[e, index[m]] = float(c)
            for v, p in enumerate(partials[e]):
                for m, c in p.terms.items():
                    self.jacobian[e, v, index[m]] = float(c)

    def _monomials(self, x: np.ndarray) -> np.ndarray:
        return np.prod(np.asarray(x, dtype=float) ** self.exponents, axis=1)

    def residual(self, x: np.ndarray) -> np.ndarray:
        return self.values @ self._monomials(x)

    def jac(self, x: np.ndarray) -> np.ndarray:
        return self.jacobian @ self._monomials(x)


def _newton(system: _CompiledSystem, x0: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray | None, str]:
    x = x0.copy()
    f = system.residual(x)
    norm = float(np.linalg.norm(f))
    for _ in range(max_iter):
        if np.max(np.abs(f)) < tol:
            return x, "converged"
        step = scipy.linalg.lstsq(system.jac(x), -f)[0]
        t = 1.0
        while True:
            candidate = x + t * step
            f_new = system.residual(candidate)
            norm_new = float(np.linalg.norm(f_new))
            if np.isfinite(norm_new) and norm_new <= norm:
                break
            t /= 2
            if t < 1e-12:
                return None, "stalled"
        x, f, norm = candidate, f_new, norm_new
    if np.max(np.abs(f)) < tol:
        return x, "converged"
    return None, "max_iter"


def _rank(matrix: np.ndarray, rel_tol: float = HESSIAN_RANK_TOL) -> int:
    if matrix.size == 0:
        return 0
    singular = scipy.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(singular > rel_tol * max(1.0, float(singular[0]))))


def solve(
    system: Sequence[RealPoly],
    seeds: int = DEFAULT_SEEDS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    *,
    nvars: int | None = None,
    polys: YMPolynomialSet | None = None,
    max_iter: int = DEFAULT_MAX_ITER,
    box: float = DEFAULT_BOX,
    threads: int | None = None,
    cluster_radius: float = CLUSTER_RADIUS,
) -> SolveResult:
    """
    Newton multistart on a real polynomial system.

    Starts are drawn uniformly from [-box, box]^{2m} by ``default_rng(seed)``
    before any work is scheduled, so results do not depend on thread count.

    Args:
        system: Equations (typically from ``stationarity_system``)
        seeds: Number of starts
        seed: Generator seed
        tol: Acceptance threshold on max |equation|
        nvars: Variable count, read from the equations when omitted
        polys: Functional to annotate clusters with values and flatness

    Returns:
        Clustered critical points in canonical order
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not system:
        logger.info("solve_all_critical")
        return SolveResult(clusters=[], failures=[], starts=0, all_critical=True)
    nvars = nvars if nvars is not None else system[0].nvars
    compiled = _CompiledSystem(system, nvars)
    starts = np.random.default_rng(seed).uniform(-box, box, size=(seeds, nvars))

    def run(index: int) -> tuple[int, np.ndarray | None, str]:
        x, status = _newton(compiled, starts[index], tol, max_iter)
        return index, x, status

    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(run, range(seeds)))

    converged, failures = [], []
    for index, x, status in outcomes:
        if x is None:
            logger.debug("solver_start_failed", start=index, reason=status)
            failures.append(StartFailure(index, status))
        else:
            converged.append(x)

    converged.sort(key=lambda x: tuple(np.round(x, 9)))
    groups: list[list[np.ndarray]] = []
    for x in converged:
        for group in groups:
            if np.linalg.norm(x - group[0]) <= cluster_radius:
                group.append(x)
                break
        else:
            groups.append([x])

    clusters = []
    for cid, group in enumerate(groups):
        rep = min(group, key=lambda x: float(np.max(np.abs(compiled.residual(x)))))
        residual = float(np.max(np.abs(compiled.residual(rep))))
        kwargs: dict[str, Any] = {}
        if polys is not None:
            values = polys.degree_values(rep)
            kwargs["degree_values"] = values
            kwargs["ym_value"] = float(polys.total.compile()(rep))
            kwargs["flat"] = {i: v <= tol for i, v in values.items()}
        clusters.append(CriticalPoint(
            cluster_id=cid,
            point=to_complex_point(rep),
            residual=residual,
            hessian_rank=_rank(compiled.jac(rep)),
            members=len(group),
            **kwargs,
        ))
    logger.info(
        "solve_done",
        starts=seeds,
        converged=len(converged),
        failed=len(failures),
        clusters=len(clusters),
    )
    return SolveResult(clusters=clusters, failures=failures, starts=seeds)


# ---------------------------------------------------------------------------
# Per-degree criteria
# ---------------------------------------------------------------------------

def covariant_derivative(theta: Sequence[Any], variation: Sequence[Any], algebra) -> dict[tuple[int, int], Any]:
    """(ϑE)_kl = [ϑ_k, E_l] + [E_k, ϑ_l] for k < l."""
    g = len(theta)
    return {
        (k, l): algebra.add(algebra.commutator(theta[k], variation[l]),
                            algebra.commutator(variation[k], theta[l]))
        for k in range(g) for l in range(k + 1, g)
    }


def _orthonormal_theta(theta: Sequence[Any], h: Any, algebra) -> list[np.ndarray]:
    blocks = [algebra.to_numpy(t) for t in theta]
    if h is None:
        return blocks
    r = scipy.linalg.cholesky(algebra.to_numpy(h), lower=False)
    r_inv = scipy.linalg.inv(r)
    return [r @ t @ r_inv for t in blocks]


def _variation_operator(theta: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Matrix of E ↦ ϑE on (C^{r×r})^g and the stacked curvature vector."""
    g = len(theta)
    r = theta[0].shape[0] if theta else 0
    pairs = [(k, l) for k in range(g) for l in range(k + 1, g)]
    columns = []
    for slot in range(g):
        for idx in range(r * r):
            e = np.zeros((r, r), dtype=complex)
            e.flat[idx] = 1.0
            variation = [e if s == slot else np.zeros((r, r), dtype=complex) for s in range(g)]
            image = [
                theta[k] @ variation[l] - variation[l] @ theta[k]
                + variation[k] @ theta[l] - theta[l] @ variation[k]
                for k, l in pairs
            ]
            columns.append(np.concatenate([m.ravel() for m in image]) if image else np.zeros(0))
    operator = np.column_stack(columns) if columns else np.zeros((0, 0), dtype=complex)
    curv = [theta[k] @ theta[l] - theta[l] @ theta[k] for k, l in pairs]
    vector = np.concatenate([c.ravel() for c in curv]) if curv else np.zeros(0, dtype=complex)
    return operator, vector


def yang_mills_equations(theta: Sequence[Any], algebra, h: Any = None) -> float:
    """‖(ϑ)† K_ϑ‖, the adjoint covariant derivative of the curvature."""
    operator, vector = _variation_operator(_orthonormal_theta(theta, h, algebra))
    if vector.size == 0:
        return 0.0
    return float(np.linalg.norm(operator.conj().T @ vector))


def _projection_residual(theta: Sequence[Any], algebra, h: Any) -> float:
    operator, vector = _variation_operator(_orthonormal_theta(theta, h, algebra))
    if vector.size == 0 or operator.size == 0:
        return 0.0
    u, singular, _ = scipy.linalg.svd(operator, full_matrices=False)
    rank = int(np.sum(singular > 1e-10 * max(1.0, float(singular[0]))))
    basis = u[:, :rank]
    return float(np.linalg.norm(basis @ (basis.conj().T @ vector)))


def is_yang_mills_per_degree(instance: YMInstance, lam: Sequence[Any]) -> dict[int, float]:
    """
    Norm of the projection of K_{ϑ^i(λ)} onto the image of E ↦ ϑ^i E.

    The image is taken over every constant variation E on H_i, so a zero
    residual in every degree means each ϑ^i(λ) is Yang-Mills on its own.
    """
    la = instance.algebra
    theta = theta_at(instance, lam)
    return {
        i: _projection_residual(blocks, la, instance.prepared.grams.get(i))
        for i, blocks in theta.items()
    }


def extend_variation(complex_: ConstantComplex, split: CohomologySplitting,
                     tau: Sequence[Any], degree: int) -> VariationClass:
    """
    Cocycle ξ whose induced variation is τ on H_degree and zero elsewhere.

    ξ^degree_k = H τ_k L_H on F^degree, zero in every other degree.
    """
    la = complex_.algebra
    g = len(tau)
    matrices = {}
    for i in complex_.degrees:
        r = complex_.rank(i)
        if i == degree and split.dimension(i):
            h, left = split.harmonic[i], split.left_inverse[i]
            matrices[i] = tuple(la.matmul(h, la.matmul(t, left)) for t in tau)
        else:
            matrices[i] = tuple(la.zeros(r, r) for _ in range(g))
    return VariationClass(g, matrices)


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountReport:
    m: int
    isolated: int
    degenerate: int
    bezout_ceiling: int
    functional_constant: bool

    @property
    def within_bezout(self) -> bool:
        return self.isolated <= self.bezout_ceiling

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "isolated": self.isolated,
            "degenerate": self.degenerate,
            "bezout_ceiling": self.bezout_ceiling,
            "within_bezout": self.within_bezout,
            "functional_constant": self.functional_constant,
        }


def count_report(result: SolveResult, m: int) -> CountReport:
    """
    Isolated and degenerate cluster counts against the 3^m ceiling.

    Raises:
        BezoutBoundError: if m = 2, every cluster is isolated and there are
            more than 9 of them
    """
    isolated = sum(1 for c in result.clusters if c.isolated)
    degenerate = len(result.clusters) - isolated
    report = CountReport(
        m=m,
        isolated=isolated,
        degenerate=degenerate if not result.all_critical else max(degenerate, 1),
        bezout_ceiling=3 ** m,
        functional_constant=result.all_critical,
    )
    if m == 2 and result.clusters and degenerate == 0 and isolated > 9:
        raise BezoutBoundError(f"{isolated} isolated critical points for m = 2")
    return report
