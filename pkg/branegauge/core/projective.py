"""
BraneGauge Projective Branes

Twisted complexes G^p = ⊕_i O(k_pi) on P^n with homogeneous-polynomial
differentials, the subcategory generated by O(-n), ..., O.

Everything here is exact: polynomials live in sympy's ``PolyRing`` over the
Gaussian rationals and linear algebra runs on the exact backend.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from typing import Any, Mapping, Sequence

import structlog
from sympy import QQ, QQ_I
from sympy.polys.rings import PolyElement, PolyRing

from .errors import InvalidChainMapError, InvalidComplexError, ValidationReport
from .hom import CohomologyResult, cohomology_from_differentials
from .linalg import Backend, get_algebra, to_fraction


logger = structlog.get_logger(__name__)

PolyMatrix = tuple[tuple[PolyElement, ...], ...]
BlockKey = tuple[int, int, int]  # (degree p, source index i, target index j)


@lru_cache(maxsize=None)
def polynomial_ring(n: int) -> PolyRing:
    """Homogeneous coordinate ring C[x_0, ..., x_n] over the Gaussian rationals."""
    return PolyRing([f"x{i}" for i in range(n + 1)], QQ_I)


def poly_from_terms(n: int, terms: Sequence[Sequence[Any]]) -> PolyElement:
    """
    Build a polynomial from ``[re, im, exponents]`` triples.

    Coefficients may be ints, Fractions or rational strings such as ``"1/2"``.
    """
    ring = polynomial_ring(n)
    poly = ring.zero
    for re, im, exps in terms:
        coeff = QQ_I(_qq(re), _qq(im))
        poly = poly + ring.from_dict({tuple(int(e) for e in exps): coeff})
    return poly


def poly_to_terms(poly: PolyElement) -> list[list]:
    """Inverse of :func:`poly_from_terms` with ``"a/b"`` strings, sorted by exponent."""
    return [
        [str(to_fraction(c.x)), str(to_fraction(c.y)), list(m)]
        for m, c in sorted(poly.items())
    ]


def _qq(value: Any):
    frac = to_fraction(value)
    return QQ(frac.numerator, frac.denominator)


def _is_homogeneous(poly: PolyElement, degree: int) -> bool:
    return all(sum(m) == degree for m in poly.keys())


def _poly_matmul(ring: PolyRing, a: Sequence[Sequence[PolyElement]],
                 b: Sequence[Sequence[PolyElement]], inner: int, ncols: int) -> list[list[PolyElement]]:
    result = []
    for row in a:
        out = []
        for c in range(ncols):
            total = ring.zero
            for k in range(inner):
                total = total + row[k] * b[k][c]
            out.append(total)
        result.append(out)
    return result


# ---------------------------------------------------------------------------
# Complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistedComplex:
    """
    Bounded complex of sums of line bundles O(k) on P^n.

    ``differentials[p][j][i]`` maps term i of degree p to term j of degree
    p+1 and is a form of degree k_{(p+1)j} - k_{pi}.
    """
    n: int
    terms: Mapping[int, tuple[int, ...]]
    differentials: Mapping[int, PolyMatrix] = field(default_factory=dict)

    @property
    def ring(self) -> PolyRing:
        return polynomial_ring(self.n)

    def twists(self, p: int) -> tuple[int, ...]:
        return tuple(self.terms.get(p, ()))

    def size(self, p: int) -> int:
        return len(self.terms.get(p, ()))

    @property
    def degrees(self) -> list[int]:
        return sorted(p for p, ks in self.terms.items() if ks)

    @property
    def is_empty(self) -> bool:
        return not self.degrees

    def entry(self, p: int, j: int, i: int) -> PolyElement:
        rows = self.differentials.get(p)
        if rows is None or j >= len(rows) or i >= len(rows[j]):
            return self.ring.zero
        return rows[j][i]

    def differential_rows(self, p: int) -> list[list[PolyElement]]:
        """Full size(p+1) x size(p) matrix of d^p, zero-filled."""
        return [[self.entry(p, j, i) for i in range(self.size(p))] for j in range(self.size(p + 1))]

    def normalized(self) -> "TwistedComplex":
        """Drop empty degrees and store every differential between nonempty degrees."""
        return _build(self.n, {p: list(self.twists(p)) for p in self.degrees},
                      {p: self.differential_rows(p) for p in self.degrees if self.size(p + 1)})


def _build(n: int, terms: Mapping[int, Sequence[int]],
           diffs: Mapping[int, Sequence[Sequence[PolyElement]]]) -> TwistedComplex:
    kept = {p: tuple(ks) for p, ks in terms.items() if ks}
    ring = polynomial_ring(n)
    differentials = {}
    for p in sorted(kept):
        if p + 1 not in kept:
            continue
        rows = diffs.get(p)
        if rows is None:
            rows = [[ring.zero] * len(kept[p]) for _ in kept[p + 1]]
        differentials[p] = tuple(tuple(row) for row in rows)
    return TwistedComplex(n=n, terms=kept, differentials=differentials)


def make_complex(n: int, terms: Mapping[int, Sequence[int]],
                 differentials: Mapping[int, Sequence[Sequence[PolyElement]]] | None = None) -> TwistedComplex:
    """Normalised constructor; missing differentials are zero."""
    return _build(n, terms, differentials or {})


def validate(complex_: TwistedComplex) -> ValidationReport:
    """
    Check every TwistedComplex invariant.

    Args:
        complex_: Complex to check

    Returns:
        Report listing violations; twists outside [-n, 0] are warnings
    """
    report = ValidationReport()
    c = complex_
    if c.n < 1:
        report.errors.append(f"projective dimension must be >= 1, got {c.n}")
        return report
    ring = c.ring

    for p in c.degrees:
        for k in c.twists(p):
            if not -c.n <= k <= 0:
                report.warnings.append(f"twist O({k}) in degree {p} lies outside [-{c.n}, 0]")

    for p, rows in sorted(c.differentials.items()):
        if c.size(p) == 0 or c.size(p + 1) == 0:
            if any(e for row in rows for e in row):
                report.errors.append(f"d^{p} is nonzero but degree {p} or {p + 1} is empty")
            continue
        if len(rows) != c.size(p + 1) or any(len(row) != c.size(p) for row in rows):
            report.errors.append(f"d^{p} must be {c.size(p + 1)}x{c.size(p)}")
            continue
        for j, row in enumerate(rows):
            for i, entry in enumerate(row):
                if entry.ring != ring:
                    report.errors.append(f"d^{p}[{j}][{i}] is not a polynomial in x0..x{c.n}")
                    continue
                required = c.twists(p + 1)[j] - c.twists(p)[i]
                if required < 0 and entry:
                    report.errors.append(
                        f"d^{p}[{j}][{i}] must be zero (required degree {required})"
                    )
                elif entry and not _is_homogeneous(entry, required):
                    report.errors.append(
                        f"d^{p}[{j}][{i}] must be homogeneous of degree {required}"
                    )
    if report.errors:
        return report

    for p in c.degrees:
        if c.size(p + 1) and c.size(p + 2):
            product = _poly_matmul(ring, c.differential_rows(p + 1), c.differential_rows(p),
                                   c.size(p + 1), c.size(p))
            if any(e for row in product for e in row):
                report.errors.append(f"d^{p + 1} d^{p} is not zero")
    return report


def require_valid(complex_: TwistedComplex) -> None:
    report = validate(complex_)
    if not report.valid:
        raise InvalidComplexError("; ".join(report.errors))


# ---------------------------------------------------------------------------
# Section spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedPiece:
    """Monomial basis of the degree-d forms in x_0, ..., x_n."""
    n: int
    d: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {m: k for k, m in enumerate(self.basis)}

    def coordinates(self, poly: PolyElement) -> list[Any]:
        coords = [QQ_I.zero] * self.dimension
        for monom, coeff in poly.items():
            coords[self.index[monom]] = coeff
        return coords

    def from_coordinates(self, coords: Sequence[Any]) -> PolyElement:
        ring = polynomial_ring(self.n)
        return ring.from_dict({m: c for m, c in zip(self.basis, coords) if c})


@lru_cache(maxsize=None)
def graded_piece(n: int, d: int) -> GradedPiece:
    """Degree-d monomials in n+1 variables, descending lexicographic order."""
    if d < 0:
        return GradedPiece(n, d, ())
    monomials = []
    for combo in combinations_with_replacement(range(n + 1), d):
        exps = [0] * (n + 1)
        for var in combo:
            exps[var] += 1
        monomials.append(tuple(exps))
    return GradedPiece(n, d, tuple(sorted(monomials, reverse=True)))


@dataclass(frozen=True)
class OmegaSections:
    """Basis of Γ(P^n, Ω¹(k)) as tuples (f_0, ..., f_n) with Σ x_i f_i = 0."""
    n: int
    k: int
    basis: tuple[tuple[PolyElement, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def satisfies_euler(self) -> bool:
        ring = polynomial_ring(self.n)
        return all(
            not sum((ring.gens[i] * f for i, f in enumerate(section)), ring.zero)
            for section in self.basis
        )


def _euler_matrix(n: int, k: int):
    """Matrix of (f_0..f_n) -> Σ x_i f_i from (S_{k-1})^{n+1} to S_k."""
    la = get_algebra(Backend.EXACT)
    source, target = graded_piece(n, k - 1), graded_piece(n, k)
    rows = [[0] * ((n + 1) * source.dimension) for _ in range(target.dimension)]
    for i in range(n + 1):
        for s, monom in enumerate(source.basis):
            raised = tuple(e + (1 if v == i else 0) for v, e in enumerate(monom))
            rows[target.index[raised]][i * source.dimension + s] = 1
    return la.matrix(rows, cols=(n + 1) * source.dimension)


@lru_cache(maxsize=None)
def omega1_sections(n: int, k: int) -> OmegaSections:
    """
    Global sections of Ω¹(k) on P^n via the Euler sequence.

    Computed as the exact kernel of (S_{k-1})^{n+1} -> S_k, (f_i) -> Σ x_i f_i.

    Args:
        n: Projective dimension
        k: Twist

    Returns:
        OmegaSections whose basis satisfies the Euler relation exactly
    """
    source = graded_piece(n, k - 1)
    if source.dimension == 0:
        return OmegaSections(n, k, ())
    la = get_algebra(Backend.EXACT)
    kernel = la.kernel_basis(_euler_matrix(n, k))
    basis = []
    for column in la.columns(kernel):
        coords = [row[0] for row in la.to_rows(column)]
        basis.append(tuple(
            source.from_coordinates(coords[i * source.dimension:(i + 1) * source.dimension])
            for i in range(n + 1)
        ))
    return OmegaSections(n, k, tuple(basis))


# ---------------------------------------------------------------------------
# Minimisation and the existence decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EliminationStep:
    """One Gaussian elimination of an invertible constant entry of d^p."""
    degree: int
    source_index: int
    target_index: int
    twist: int
    pivot: tuple[Fraction, Fraction]

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "source_index": self.source_index,
            "target_index": self.target_index,
            "twist": self.twist,
            "pivot": [str(self.pivot[0]), str(self.pivot[1])],
        }


@dataclass(frozen=True)
class Minimization:
    """Minimised complex plus the elimination steps witnessing the homotopy equivalence."""
    complex: TwistedComplex
    steps: tuple[EliminationStep, ...]


def _find_pivot(n: int, terms: dict[int, list[int]],
                diffs: dict[int, list[list[PolyElement]]]) -> tuple[int, int, int] | None:
    for p in sorted(diffs):
        if p not in terms or p + 1 not in terms:
            continue
        for j, row in enumerate(diffs[p]):
            for i, entry in enumerate(row):
                if terms[p][i] == terms[p + 1][j] and entry and entry.is_ground:
                    return p, j, i
    return None


def eliminate(complex_: TwistedComplex) -> Minimization:
    """
    Remove contractible summands by Gaussian elimination.

    For an invertible constant φ: b -> c inside d^p = [[φ, β], [γ, δ]],
    the complex is homotopy equivalent to the one with b and c removed,
    d^p replaced by δ - γ φ⁻¹ β, row b dropped from d^{p-1} and column c
    dropped from d^{p+1}. Pivots are taken in (p, j, i) order.
    """
    c = complex_.normalized()
    ring = c.ring
    terms = {p: list(c.twists(p)) for p in c.degrees}
    diffs = {p: [list(row) for row in c.differential_rows(p)] for p in c.differentials}
    steps = []

    while (pivot := _find_pivot(c.n, terms, diffs)) is not None:
        p, j, i = pivot
        phi_poly = diffs[p][j][i]
        phi = phi_poly.get(ring.zero_monom, QQ_I.zero)
        phi_inv = QQ_I.one / phi
        d = diffs[p]
        reduced = []
        for jj, row in enumerate(d):
            if jj == j:
                continue
            gamma = row[i]
            reduced.append([
                entry - gamma * d[j][ii] * phi_inv
                for ii, entry in enumerate(row) if ii != i
            ])
        diffs[p] = reduced
        if p - 1 in diffs:
            diffs[p - 1] = [row for jj, row in enumerate(diffs[p - 1]) if jj != i]
        if p + 1 in diffs:
            diffs[p + 1] = [[e for ii, e in enumerate(row) if ii != j] for row in diffs[p + 1]]
        twist = terms[p].pop(i)
        terms[p + 1].pop(j)
        steps.append(EliminationStep(
            degree=p, source_index=i, target_index=j, twist=twist,
            pivot=(to_fraction(phi.x), to_fraction(phi.y)),
        ))
        logger.debug("minimize_step", degree=p, source_index=i, target_index=j, twist=twist)

    result = _build(c.n, terms, diffs)
    if steps:
        logger.info("minimize_done", eliminated_pairs=len(steps), degrees=result.degrees)
    return Minimization(complex=result, steps=tuple(steps))


def minimize(complex_: TwistedComplex) -> TwistedComplex:
    """Homotopy-equivalent complex with no invertible entry between equal twists."""
    return eliminate(complex_).complex


def first_chern_classes(complex_: TwistedComplex) -> dict[int, int]:
    """c_1(G^p) = Σ_i k_pi in each degree."""
    return {p: sum(complex_.twists(p)) for p in complex_.degrees}


@dataclass(frozen=True)
class GaugeFieldDecision:
    """
    Existence decision for a holomorphic gauge field on a twisted complex.

    ``offending`` is (degree, index, twist) of the first nonzero twist of the
    minimised complex; ``canonical_field`` holds the zero connection matrix
    of each degree (componentwise ∂) when a field exists.
    """
    exists: bool
    minimized: TwistedComplex
    steps: tuple[EliminationStep, ...]
    offending: tuple[int, int, int] | None
    first_chern_classes: dict[int, int]
    canonical_field: dict[int, Any] | None

    def to_dict(self) -> dict:
        la = get_algebra(Backend.EXACT)
        return {
            "exists": self.exists,
            "minimized_terms": {str(p): list(self.minimized.twists(p)) for p in self.minimized.degrees},
            "steps": [s.to_dict() for s in self.steps],
            "offending": list(self.offending) if self.offending else None,
            "first_chern_classes": {str(p): c for p, c in self.first_chern_classes.items()},
            "canonical_field": None if self.canonical_field is None else {
                str(p): [[[str(to_fraction(e.x)), str(to_fraction(e.y))] for e in row] for row in la.to_rows(m)]
                for p, m in self.canonical_field.items()
            },
        }


def gauge_field_exists(complex_: TwistedComplex) -> GaugeFieldDecision:
    """
    Decide whether the brane admits a holomorphic gauge field.

    A field exists iff the minimised complex is a sum of copies of O,
    i.e. every remaining twist is 0.
    """
    require_valid(complex_)
    minimization = eliminate(complex_)
    minimal = minimization.complex
    offending = None
    for p in minimal.degrees:
        for idx, k in enumerate(minimal.twists(p)):
            if k != 0:
                offending = (p, idx, k)
                break
        if offending:
            break
    canonical = None
    if offending is None:
        la = get_algebra(Backend.EXACT)
        canonical = {p: la.zeros(minimal.size(p), minimal.size(p)) for p in minimal.degrees}
    logger.info(
        "gauge_field_decision",
        exists=offending is None,
        eliminated_pairs=len(minimization.steps),
        offending=offending,
    )
    return GaugeFieldDecision(
        exists=offending is None,
        minimized=minimal,
        steps=minimization.steps,
        offending=offending,
        first_chern_classes=first_chern_classes(minimal),
        canonical_field=canonical,
    )


# ---------------------------------------------------------------------------
# Gauge space H^0 Hom(C, Ω¹(C))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _OmegaBlock:
    n: int
    key: BlockKey
    twist: int
    ambient_offset: int
    sub_offset: int

    @property
    def piece(self) -> GradedPiece:
        return graded_piece(self.n, self.twist - 1)

    @property
    def sections(self) -> OmegaSections:
        return omega1_sections(self.n, self.twist)

    @property
    def ambient_dimension(self) -> int:
        return (self.n + 1) * self.piece.dimension

    @property
    def sub_dimension(self) -> int:
        return self.sections.dimension


class HomOmegaLayout:
    """
    Coordinates on Hom^m(C, Ω¹(C)).

    The block for (p, i, j) is Γ(Ω¹(k_{p+m,j} - k_{p,i})). The ambient space
    drops the Euler relation: tuples of n+1 forms of degree k - 1.
    """

    def __init__(self, complex_: TwistedComplex, degree: int):
        self.complex = complex_
        self.degree = degree
        self.blocks: list[_OmegaBlock] = []
        ambient = sub = 0
        for p in complex_.degrees:
            q = p + degree
            for i, ki in enumerate(complex_.twists(p)):
                for j, kj in enumerate(complex_.twists(q)):
                    block = _OmegaBlock(key=(p, i, j), twist=kj - ki,
                                        ambient_offset=ambient, sub_offset=sub, n=complex_.n)
                    self.blocks.append(block)
                    ambient += block.ambient_dimension
                    sub += block.sub_dimension
        self.ambient_dimension = ambient
        self.sub_dimension = sub
        self.by_key = {b.key: b for b in self.blocks}

    def embedding(self):
        """Ambient x sub matrix whose columns are the Ω¹ section basis."""
        la = get_algebra(Backend.EXACT)
        rows = [[QQ_I.zero] * self.sub_dimension for _ in range(self.ambient_dimension)]
        for block in self.blocks:
            piece = block.piece
            for s, section in enumerate(block.sections.basis):
                for t, poly in enumerate(section):
                    base = block.ambient_offset + t * piece.dimension
                    for k, coeff in enumerate(piece.coordinates(poly)):
                        rows[base + k][block.sub_offset + s] = coeff
        return la.matrix(rows, cols=self.sub_dimension)

    def to_column(self, element: Mapping[BlockKey, Sequence[PolyElement]]):
        la = get_algebra(Backend.EXACT)
        coords = [QQ_I.zero] * self.ambient_dimension
        for block in self.blocks:
            section = element.get(block.key)
            if section is None:
                continue
            piece = block.piece
            for t, poly in enumerate(section):
                base = block.ambient_offset + t * piece.dimension
                for k, coeff in enumerate(piece.coordinates(poly)):
                    coords[base + k] = coeff
        return la.matrix([[c] for c in coords], cols=1)

    def to_element(self, column) -> dict[BlockKey, tuple[PolyElement, ...]]:
        la = get_algebra(Backend.EXACT)
        coords = [row[0] for row in la.to_rows(column)]
        element = {}
        for block in self.blocks:
            piece = block.piece
            element[block.key] = tuple(
                piece.from_coordinates(
                    coords[block.ambient_offset + t * piece.dimension:
                           block.ambient_offset + (t + 1) * piece.dimension]
                )
                for t in range(self.complex.n + 1)
            )
        return element

    def unit_elements(self):
        ring = self.complex.ring
        for block in self.blocks:
            for t in range(self.complex.n + 1):
                for monom in block.piece.basis:
                    section = [ring.zero] * (self.complex.n + 1)
                    section[t] = ring.from_dict({monom: QQ_I.one})
                    yield {block.key: tuple(section)}


def apply_omega_differential(complex_: TwistedComplex, degree: int,
                             element: Mapping[BlockKey, Sequence[PolyElement]]
                             ) -> dict[BlockKey, tuple[PolyElement, ...]]:
    """
    δ_H on Hom^m(C, Ω¹(C)) with d acting componentwise on Ω¹-valued blocks.

    (δg)^p = (1 ⊗ d^{p+m}) g^p + (-1)^{m+1} g^{p+1} d^p
    """
    c = complex_
    ring = c.ring
    width = c.n + 1
    sign = 1 if (degree + 1) % 2 == 0 else -1
    zero = tuple([ring.zero] * width)
    result = {}
    for p in c.degrees:
        q = p + degree + 1
        for i in range(c.size(p)):
            for l in range(c.size(q)):
                acc = [ring.zero] * width
                for j in range(c.size(p + degree)):
                    d_entry = c.entry(p + degree, l, j)
                    if not d_entry:
                        continue
                    g = element.get((p, i, j), zero)
                    for t in range(width):
                        acc[t] = acc[t] + d_entry * g[t]
                for ii in range(c.size(p + 1)):
                    d_entry = c.entry(p, ii, i)
                    if not d_entry:
                        continue
                    g = element.get((p + 1, ii, l), zero)
                    for t in range(width):
                        acc[t] = acc[t] + g[t] * d_entry * sign
                result[(p, i, l)] = tuple(acc)
    return result


def ambient_differential(complex_: TwistedComplex, degree: int):
    """Matrix of δ_H from ambient Hom^m to ambient Hom^{m+1}."""
    la = get_algebra(Backend.EXACT)
    source = HomOmegaLayout(complex_, degree)
    target = HomOmegaLayout(complex_, degree + 1)
    columns = [
        target.to_column(apply_omega_differential(complex_, degree, unit))
        for unit in source.unit_elements()
    ]
    return la.hstack(columns, target.ambient_dimension)


@dataclass(frozen=True)
class GaugeSpace:
    """H^0 Hom•(C, Ω¹(C)) with representatives as Ω¹-valued blocks."""
    result: CohomologyResult
    basis: list[dict[BlockKey, tuple[PolyElement, ...]]]

    @property
    def dimension(self) -> int:
        return self.result.dimension

    def to_dict(self) -> dict:
        return {
            **self.result.to_dict(),
            "basis": [
                [
                    {"block": list(key), "components": [poly_to_terms(c) for c in comps]}
                    for key, comps in sorted(element.items())
                ]
                for element in self.basis
            ],
        }


def gauge_space(complex_: TwistedComplex) -> GaugeSpace:
    """
    The vector space over which gauge fields form an affine space.

    Cocycles are computed on the Ω¹ section basis of Hom^0; coboundaries
    come from Hom^{-1} and are re-expressed in that basis.
    """
    require_valid(complex_)
    la = get_algebra(Backend.EXACT)
    c = complex_.normalized()
    layout0 = HomOmegaLayout(c, 0)
    layout_prev = HomOmegaLayout(c, -1)
    embed0 = layout0.embedding()
    embed_prev = layout_prev.embedding()
    d_curr = la.matmul(ambient_differential(c, 0), embed0)
    boundaries = la.matmul(ambient_differential(c, -1), embed_prev)
    d_prev = la.matmul(la.left_inverse(embed0), boundaries)
    result = cohomology_from_differentials(la, d_prev, d_curr)
    basis = [
        layout0.to_element(la.matmul(embed0, rep))
        for rep in la.columns(result.representatives)
    ]
    logger.debug(
        "gauge_space_computed",
        dimension=result.dimension,
        hom0_dimension=layout0.sub_dimension,
        cocycles=result.cocycle_dimension,
        coboundaries=result.coboundary_dimension,
    )
    return GaugeSpace(result=result, basis=basis)


def gauge_space_dimension(complex_: TwistedComplex) -> int:
    """dim H^0 Hom•(C, Ω¹(C)), reported whatever its value."""
    return gauge_space(complex_).dimension


# ---------------------------------------------------------------------------
# Shifts, sums and cones
# ---------------------------------------------------------------------------

def shift(complex_: TwistedComplex, amount: int) -> TwistedComplex:
    """C[l]^p = C^{p+l}; differentials are multiplied by (-1)^l."""
    c = complex_.normalized()
    sign = -1 if amount % 2 else 1
    return _build(
        c.n,
        {p - amount: list(c.twists(p)) for p in c.degrees},
        {p - amount: [[e * sign for e in row] for row in c.differential_rows(p)]
         for p in c.differentials},
    )


def direct_sum(first: TwistedComplex, second: TwistedComplex) -> TwistedComplex:
    """Termwise sum; first summand's terms come first in every degree."""
    if first.n != second.n:
        raise InvalidComplexError(f"cannot sum complexes on P^{first.n} and P^{second.n}")
    ring = polynomial_ring(first.n)
    degrees = sorted(set(first.degrees) | set(second.degrees))
    terms = {p: list(first.twists(p)) + list(second.twists(p)) for p in degrees}
    diffs = {}
    for p in degrees:
        a, b = first.differential_rows(p), second.differential_rows(p)
        rows = [row + [ring.zero] * second.size(p) for row in a]
        rows += [[ring.zero] * first.size(p) + row for row in b]
        diffs[p] = rows
    return _build(first.n, terms, diffs)


@dataclass(frozen=True)
class TwistedChainMap:
    """Degree-0 map h: A -> B; ``components[p][j][i]`` maps A^p_i to B^p_j."""
    source: TwistedComplex
    target: TwistedComplex
    components: Mapping[int, PolyMatrix] = field(default_factory=dict)

    def entry(self, p: int, j: int, i: int) -> PolyElement:
        rows = self.components.get(p)
        if rows is None or j >= len(rows) or i >= len(rows[j]):
            return self.source.ring.zero
        return rows[j][i]

    def rows(self, p: int) -> list[list[PolyElement]]:
        return [[self.entry(p, j, i) for i in range(self.source.size(p))]
                for j in range(self.target.size(p))]


def validate_chain_map(h: TwistedChainMap) -> ValidationReport:
    """Degree bookkeeping and d_B h = h d_A in every degree."""
    report = ValidationReport()
    a, b = h.source, h.target
    if a.n != b.n:
        report.errors.append(f"source on P^{a.n}, target on P^{b.n}")
        return report
    ring = a.ring
    for p, rows in sorted(h.components.items()):
        if len(rows) != b.size(p) or any(len(row) != a.size(p) for row in rows):
            report.errors.append(f"h^{p} must be {b.size(p)}x{a.size(p)}")
    if report.errors:
        return report
    for p in sorted(set(a.degrees) | set(b.degrees)):
        for j in range(b.size(p)):
            for i in range(a.size(p)):
                entry = h.entry(p, j, i)
                required = b.twists(p)[j] - a.twists(p)[i]
                if entry and (required < 0 or not _is_homogeneous(entry, required)):
                    report.errors.append(f"h^{p}[{j}][{i}] must have degree {required}")
    if report.errors:
        return report
    for p in sorted(set(a.degrees) | set(b.degrees)):
        left = _poly_matmul(ring, b.differential_rows(p), h.rows(p), b.size(p), a.size(p))
        right = _poly_matmul(ring, h.rows(p + 1), a.differential_rows(p), a.size(p + 1), a.size(p))
        if any(x != y for lrow, rrow in zip(left, right) for x, y in zip(lrow, rrow)):
            report.errors.append(f"d_B h^{p} != h^{p + 1} d_A in degree {p}")
    return report


def cone(h: TwistedChainMap) -> TwistedComplex:
    """
    Mapping cone: Cone^p = A^{p+1} ⊕ B^p with

        d^p = [[-d_A^{p+1}, 0], [h^{p+1}, d_B^p]]

    Raises:
        InvalidChainMapError: if h is not a chain map
    """
    report = validate_chain_map(h)
    if not report.valid:
        raise InvalidChainMapError("; ".join(report.errors))
    a, b = h.source, h.target
    ring = a.ring
    degrees = sorted({p - 1 for p in a.degrees} | set(b.degrees))
    terms = {p: list(a.twists(p + 1)) + list(b.twists(p)) for p in degrees}
    diffs = {}
    for p in degrees:
        upper = [[-e for e in row] + [ring.zero] * b.size(p) for row in a.differential_rows(p + 1)]
        lower = [hr + dr for hr, dr in zip(h.rows(p + 1), b.differential_rows(p))]
        diffs[p] = upper + lower
    return _build(a.n, terms, diffs)


def identity_map(complex_: TwistedComplex) -> TwistedChainMap:
    ring = complex_.ring
    components = {
        p: tuple(tuple(ring.one if i == j else ring.zero for i in range(complex_.size(p)))
                 for j in range(complex_.size(p)))
        for p in complex_.degrees
    }
    return TwistedChainMap(complex_, complex_, components)


def zero_map(source: TwistedComplex, target: TwistedComplex) -> TwistedChainMap:
    return TwistedChainMap(source, target, {})
