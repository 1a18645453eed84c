"""
Tests for twisted complexes on projective space.
"""

from fractions import Fraction
from math import comb

import numpy as np
import pytest

from branegauge.core.errors import InvalidChainMapError, InvalidComplexError
from branegauge.core.projective import (
    HomOmegaLayout,
    TwistedChainMap,
    ambient_differential,
    cone,
    direct_sum,
    eliminate,
    gauge_field_exists,
    gauge_space,
    gauge_space_dimension,
    graded_piece,
    identity_map,
    make_complex,
    minimize,
    omega1_sections,
    poly_from_terms,
    poly_to_terms,
    polynomial_ring,
    require_valid,
    shift,
    validate,
    validate_chain_map,
    zero_map,
)
from branegauge.core.linalg import Backend, get_algebra
from branegauge.loaders import ProjectiveBrane, load_brane


def _x(n: int, i: int):
    return polynomial_ring(n).gens[i]


def _fixture(fixtures_dir, name: str):
    brane = load_brane(fixtures_dir / name, get_algebra(Backend.EXACT))
    assert isinstance(brane, ProjectiveBrane)
    return brane.complex


def _random_narrow_complex(rng: np.random.Generator):
    """Twists in {t - 1, t}, n <= 3, length <= 4; only even-degree maps are nonzero, so d² = 0."""
    n = int(rng.integers(1, 4))
    t = int(rng.integers(-n + 1, 1))
    length = int(rng.integers(1, 5))
    terms = {p: [t - int(rng.integers(0, 2)) for _ in range(int(rng.integers(1, 3)))] for p in range(length)}
    differentials = {}
    for p in range(0, length - 1, 2):
        rows = []
        for target in terms[p + 1]:
            row = []
            for source in terms[p]:
                degree = target - source
                if degree < 0:
                    row.append(polynomial_ring(n).zero)
                    continue
                exps = [[int(j == i) for j in range(n + 1)] for i in range(n + 1)] if degree else [[0] * (n + 1)]
                row.append(poly_from_terms(n, [
                    [int(rng.integers(-2, 3)), int(rng.integers(-2, 3)), e] for e in exps
                ]))
            rows.append(row)
        differentials[p] = rows
    return make_complex(n, terms, differentials)


def _three_term_complex(n: int):
    """O(-2) --(x0 x1, x0)--> O ⊕ O(-1) --(1, -x1)--> O."""
    x0, x1 = _x(n, 0), _x(n, 1)
    ring = polynomial_ring(n)
    return make_complex(n, {0: [-2], 1: [0, -1], 2: [0]}, {0: [[x0 * x1], [x0]], 1: [[ring.one, -x1]]})


def _random_reducible_complex(rng: np.random.Generator):
    """A narrow complex plus up to two summands O(k) --c--> O(k) with c a nonzero constant."""
    c = _random_narrow_complex(rng)
    pairs = int(rng.integers(0, 3))
    for _ in range(pairs):
        p = int(rng.integers(-1, 4))
        k = int(rng.integers(-c.n, 1))
        re = int(rng.choice([-2, -1, 1, 2]))
        im = int(rng.integers(-1, 2))
        pivot = poly_from_terms(c.n, [[re, im, [0] * (c.n + 1)]])
        c = direct_sum(c, make_complex(c.n, {p: [k], p + 1: [k]}, {p: [[pivot]]}))
    return c, pairs


def _dense_rank(m: np.ndarray) -> int:
    return 0 if 0 in m.shape else int(np.linalg.matrix_rank(m))


class TestPolynomials:
    """Tests for polynomial helpers."""

    def test_terms_round_trip(self):
        """[re, im, exponents] triples rebuild the same polynomial."""
        poly = poly_from_terms(2, [["1/2", "0", [1, 1, 0]], [0, -3, [0, 0, 2]]])
        again = poly_from_terms(2, poly_to_terms(poly))
        assert again == poly
        assert poly_to_terms(poly)[0][:2] == ["0", "-3"]

    def test_graded_piece_dimension(self):
        """dim S_d = C(n + d, d) for every d <= 8 and n <= 4."""
        for n in range(1, 5):
            for d in range(9):
                piece = graded_piece(n, d)
                assert piece.dimension == comb(n + d, d)
                assert len(set(piece.basis)) == piece.dimension
                assert all(sum(m) == d and len(m) == n + 1 for m in piece.basis)

    def test_negative_degree_is_empty(self):
        """There are no forms of negative degree."""
        assert graded_piece(2, -1).dimension == 0


class TestOmegaSections:
    """Tests for sections of twisted cotangent bundles."""

    @pytest.mark.parametrize("n, k", [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2)])
    def test_dimension_from_euler_sequence(self, n, k):
        """h^0(Ω¹(k)) = (n+1) C(n+k-1, n) - C(n+k, n)."""
        expected = (n + 1) * comb(n + k - 1, n) - comb(n + k, n)
        sections = omega1_sections(n, k)
        assert sections.dimension == expected
        assert sections.satisfies_euler()

    @pytest.mark.parametrize("k", [-2, 0, 1])
    def test_no_sections_for_small_twists(self, k):
        """Ω¹(k) has no sections for k <= 1."""
        assert omega1_sections(2, k).dimension == 0


class TestValidation:
    """Tests for twisted complex invariants."""

    def test_valid_fixture(self, fixtures_dir):
        """The x0 fixture is a valid complex."""
        report = validate(_fixture(fixtures_dir, "projective_x0.json"))
        assert report.valid and not report.warnings

    def test_wrong_degree_entry(self):
        """An entry O(-1) -> O must be linear."""
        x0 = _x(1, 0)
        c = make_complex(1, {0: [-1], 1: [0]}, {0: [[x0 * x0]]})
        with pytest.raises(InvalidComplexError):
            require_valid(c)

    def test_negative_required_degree(self):
        """A map O -> O(-1) must vanish."""
        ring = polynomial_ring(1)
        c = make_complex(1, {0: [0], 1: [-1]}, {0: [[ring.one]]})
        assert not validate(c).valid

    def test_nonzero_square(self):
        """d^1 d^0 != 0 is reported."""
        ring = polynomial_ring(2)
        c = make_complex(2, {0: [0], 1: [0], 2: [0]}, {0: [[ring.one]], 1: [[ring.one]]})
        report = validate(c)
        assert any("is not zero" in e for e in report.errors)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_single_trivial_term(self, n):
        """[O] in degree 0 is valid without warnings."""
        report = validate(make_complex(n, {0: [0]}))
        assert report.valid and not report.warnings

    def test_twist_outside_range_warns(self):
        """O(1) on P^1 is allowed but flagged."""
        report = validate(make_complex(1, {0: [1]}))
        assert report.valid
        assert report.warnings


class TestGaugeFieldExistence:
    """Tests for the existence decision."""

    def test_skyscraper_has_no_field(self, fixtures_dir):
        """O(-1) --x0--> O is minimal with a nonzero twist."""
        decision = gauge_field_exists(_fixture(fixtures_dir, "projective_x0.json"))
        assert not decision.exists
        assert decision.offending == (-1, 0, -1)
        assert decision.canonical_field is None
        assert decision.first_chern_classes == {-1: -1, 0: 0}

    def test_constant_map_reduces_to_trivial(self, fixtures_dir):
        """O² --[1, -1]--> O is equivalent to O in degree 0."""
        decision = gauge_field_exists(_fixture(fixtures_dir, "projective_constant.json"))
        assert decision.exists
        assert len(decision.steps) == 1
        assert decision.minimized.terms == {0: (0,)}
        data = decision.to_dict()
        assert data["canonical_field"] == {"0": [[["0", "0"]]]}
        assert data["steps"][0]["pivot"] == ["1", "0"]

    def test_contractible_summand_removed(self, fixtures_dir):
        """O(-1) --1--> O(-1) cancels, leaving O."""
        decision = gauge_field_exists(_fixture(fixtures_dir, "projective_contractible_summand.json"))
        assert decision.exists
        assert decision.minimized.terms == {0: (0,)}

    def test_pair_plus_zero_map(self):
        """[O(-1) --1--> O(-1)] ⊕ [O --0--> O] reduces to O in degrees 0 and 1."""
        ring = polynomial_ring(1)
        c = make_complex(1, {0: [-1, 0], 1: [-1, 0]}, {0: [[ring.one, ring.zero], [ring.zero, ring.zero]]})
        require_valid(c)
        decision = gauge_field_exists(c)
        assert decision.exists
        assert len(decision.steps) == 1
        assert decision.minimized.terms == {0: (0,), 1: (0,)}

    def test_minimize_is_idempotent(self):
        """A minimised complex has no pivots left and minimises to itself."""
        rng = np.random.default_rng(5050)
        for _ in range(500):
            c, pairs = _random_reducible_complex(rng)
            require_valid(c)
            first = eliminate(c)
            assert len(first.steps) >= pairs
            again = eliminate(first.complex)
            assert not again.steps
            assert again.complex.terms == first.complex.terms
            assert again.complex.differentials == first.complex.differentials
            assert minimize(minimize(c)).terms == minimize(c).terms

    def test_sum_of_trivial_bundles(self):
        """O³ in several degrees with zero differential has a field."""
        c = make_complex(2, {-1: [0], 0: [0, 0]})
        decision = gauge_field_exists(c)
        assert decision.exists
        assert not decision.steps

    def test_cone_of_identity_is_contractible(self, fixtures_dir):
        """Cone(id) minimises to the zero complex."""
        c = _fixture(fixtures_dir, "projective_x0.json")
        minimal = eliminate(cone(identity_map(c))).complex
        assert minimal.is_empty
        assert gauge_field_exists(cone(identity_map(c))).exists


class TestGaugeSpace:
    """Tests for H^0 Hom(C, Ω¹(C))."""

    def test_trivial_bundle(self):
        """End(O) ⊗ Ω¹ has no sections."""
        assert gauge_space_dimension(make_complex(2, {0: [0]})) == 0

    @pytest.mark.parametrize("n, expected", [(1, 1), (2, 3)])
    def test_off_diagonal_block(self, n, expected):
        """O(-2) ⊕ O picks up Γ(Ω¹(2)) from the off-diagonal block."""
        space = gauge_space(make_complex(n, {0: [-2, 0]}))
        assert space.dimension == expected
        assert len(space.basis) == expected
        assert space.to_dict()["dimension"] == expected

    def test_small_twist_gaps_have_no_gauge_parameters(self):
        """Complexes whose twists differ by at most one have a zero gauge space."""
        rng = np.random.default_rng(3030)
        for _ in range(100):
            c = _random_narrow_complex(rng)
            require_valid(c)
            assert gauge_space_dimension(c) == 0

    def test_shift_invariance(self):
        """Shifting a complex does not change its gauge space."""
        c = make_complex(2, {0: [-2, 0], 1: [0]}, {0: [[_x(2, 0) * _x(2, 1), polynomial_ring(2).zero]]})
        require_valid(c)
        assert gauge_space_dimension(shift(c, 1)) == gauge_space_dimension(c)
        assert gauge_space_dimension(shift(c, -2)) == gauge_space_dimension(c)

    @pytest.mark.parametrize("n, expected", [(1, 1), (2, 3)])
    def test_contractible_summand_invariance(self, n, expected):
        """Adding O(k) --1--> O(k) changes neither the decision nor the gauge space."""
        base = make_complex(n, {0: [-2, 0]})
        ring = polynomial_ring(n)
        for k in (-2, 0):
            for p in (-1, 0, 1):
                pair = make_complex(n, {p: [k], p + 1: [k]}, {p: [[ring.one]]})
                total = direct_sum(base, pair)
                require_valid(total)
                assert gauge_space_dimension(total) == expected
                assert gauge_field_exists(total).exists == gauge_field_exists(base).exists

    def test_contractible_summand_invariance_sweep(self):
        """The same holds for random narrow complexes."""
        rng = np.random.default_rng(6060)
        for _ in range(60):
            c = _random_narrow_complex(rng)
            ring = polynomial_ring(c.n)
            k = int(rng.choice([k for p in c.degrees for k in c.twists(p)]))
            p = int(rng.integers(-1, 4))
            total = direct_sum(c, make_complex(c.n, {p: [k], p + 1: [k]}, {p: [[ring.one]]}))
            require_valid(total)
            assert gauge_space_dimension(total) == gauge_space_dimension(c)
            assert gauge_field_exists(total).exists == gauge_field_exists(c).exists

    @pytest.mark.parametrize("c", [
        _three_term_complex(1),
        _three_term_complex(2),
        make_complex(1, {0: [-2, 0]}),
        make_complex(2, {0: [-2, 0], 1: [0]}, {0: [[_x(2, 0) * _x(2, 1), polynomial_ring(2).zero]]}),
    ])
    def test_dense_rank_cross_check(self, c):
        """dim Γ Hom^0 - rank δ^0 - rank δ^{-1}, with numpy ranks, matches the exact result."""
        require_valid(c)
        la = get_algebra(Backend.EXACT)
        embed0 = HomOmegaLayout(c, 0).embedding()
        cocycles = la.to_numpy(la.matmul(ambient_differential(c, 0), embed0))
        boundaries = la.to_numpy(la.matmul(ambient_differential(c, -1), HomOmegaLayout(c, -1).embedding()))
        expected = HomOmegaLayout(c, 0).sub_dimension - _dense_rank(cocycles) - _dense_rank(boundaries)
        assert gauge_space(c).dimension == expected

    @pytest.mark.parametrize("n", [1, 2])
    def test_three_term_complex_matches_minimal_model(self, n):
        """[O(-2) -> O ⊕ O(-1) -> O] and its minimisation O(-2) --x0--> O(-1) agree."""
        c = _three_term_complex(n)
        minimal = minimize(c)
        assert minimal.terms == {0: (-2,), 1: (-1,)}
        assert gauge_space_dimension(c) == gauge_space_dimension(minimal) == 0

    def test_direct_sum_terms(self):
        """Terms concatenate degree by degree."""
        total = direct_sum(make_complex(1, {0: [0]}), make_complex(1, {0: [-1], 1: [0]}))
        assert total.terms == {0: (0, -1), 1: (0,)}

    def test_direct_sum_needs_same_space(self):
        """Complexes on different projective spaces cannot be added."""
        with pytest.raises(InvalidComplexError):
            direct_sum(make_complex(1, {0: [0]}), make_complex(2, {0: [0]}))


class TestChainMaps:
    """Tests for chain maps and cones."""

    def test_zero_map_is_chain_map(self, fixtures_dir):
        """The zero map always commutes with the differentials."""
        c = _fixture(fixtures_dir, "projective_x0.json")
        assert validate_chain_map(zero_map(c, c)).valid

    def test_non_commuting_map_rejected(self, fixtures_dir):
        """Identity in one degree only is not a chain map."""
        c = _fixture(fixtures_dir, "projective_x0.json")
        ring = c.ring
        h = TwistedChainMap(c, c, {0: ((ring.one,),)})
        with pytest.raises(InvalidChainMapError):
            cone(h)

    def test_cone_terms(self, fixtures_dir):
        """Cone^p = A^{p+1} ⊕ B^p."""
        c = _fixture(fixtures_dir, "projective_x0.json")
        result = cone(identity_map(c))
        assert result.terms == {-2: (-1,), -1: (0, -1), 0: (0,)}
        assert validate(result).valid

    def test_rational_pivot(self):
        """Elimination divides by Gaussian-rational pivots."""
        pivot = poly_from_terms(1, [["2/3", "0", [0, 0]]])
        c = make_complex(1, {0: [0], 1: [0]}, {0: [[pivot]]})
        steps = eliminate(c).steps
        assert steps[0].pivot == (Fraction(2, 3), Fraction(0))
