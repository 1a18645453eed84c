"""
Tests for matrix complexes and the Hom complex.
"""

import numpy as np
import pytest

from branegauge.core.errors import DimensionMismatchError, InvalidComplexError
from branegauge.core.hom import (
    HomElement,
    HomSpace,
    MatrixComplex,
    cohomology_dimensions,
    differential_matrix,
    hom_cohomology,
    hom_differential,
    hom_is_zero,
)
from branegauge.core.linalg import kernel_basis

from .conftest import random_brane, random_homotopy, to_algebra, unimodular


def _contractible(algebra) -> MatrixComplex:
    return MatrixComplex(algebra, {0: 1, 1: 1}, {0: algebra.matrix([[1]])})


def _change_basis(rng: np.random.Generator, complex_: MatrixComplex) -> MatrixComplex:
    """D^p -> S_{p+1} D^p S_p⁻¹ with integer unimodular S_p."""
    la = complex_.algebra
    degrees = set(complex_.ranks) | {p + 1 for p in complex_.differentials}
    frames = {p: unimodular(rng, complex_.rank(p)) for p in degrees}
    differentials = {
        p: to_algebra(frames[p + 1][0] @ la.to_numpy(d) @ frames[p][1], la)
        for p, d in complex_.differentials.items()
    }
    return MatrixComplex(la, dict(complex_.ranks), differentials)


class TestMatrixComplex:
    """Tests for MatrixComplex validation and cohomology."""

    def test_wrong_shape_is_reported(self, exact):
        """A differential with the wrong shape makes the complex invalid."""
        c = MatrixComplex(exact, {0: 1, 1: 2}, {0: exact.matrix([[1]])})
        report = c.validate()
        assert not report.valid
        assert "shape" in report.errors[0]

    def test_nonzero_square_is_reported(self, exact):
        """d^1 d^0 != 0 raises InvalidComplexError."""
        c = MatrixComplex(exact, {0: 1, 1: 1, 2: 1},
                          {0: exact.matrix([[1]]), 1: exact.matrix([[1]])})
        with pytest.raises(InvalidComplexError):
            c.require_valid()

    def test_missing_differentials_are_zero(self, exact):
        """Cohomology of a complex without differentials is its ranks."""
        c = MatrixComplex(exact, {-1: 2, 0: 0, 3: 1})
        assert cohomology_dimensions(c) == {-1: 2, 3: 1}

    def test_contractible_pair(self, exact):
        """V --id--> V is acyclic."""
        assert cohomology_dimensions(_contractible(exact)) == {0: 0, 1: 0}

    def test_shift_moves_cohomology(self, exact):
        """C[2] has H^p equal to H^{p+2}(C)."""
        rng = np.random.default_rng(11)
        brane = random_brane(rng, exact, g=1)
        shifted = brane.complex.shifted(2)
        shifted.require_valid()
        assert cohomology_dimensions(shifted) == {p - 2: h for p, h in brane.cohomology.items()}


class TestHomDifferential:
    """Tests for δ_H."""

    @pytest.mark.parametrize("seed", range(5))
    def test_square_is_zero(self, exact, seed):
        """δ_H δ_H = 0 on random degree -1 elements with several slots."""
        rng = np.random.default_rng(seed)
        brane = random_brane(rng, exact, g=2)
        c = brane.complex
        x = random_homotopy(rng, brane)
        once = hom_differential(x, c, c)
        twice = hom_differential(once, c, c)
        assert once.degree == 0 and twice.degree == 1
        assert hom_is_zero(twice, exact)

    def test_square_is_zero_sweep(self, exact):
        """δ_H δ_H = 0 over a thousand seeded instances of varying length and g."""
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            g = int(rng.integers(1, 4))
            brane = random_brane(rng, exact, g=g, length=int(rng.integers(1, 5)), max_cohomology=1)
            c = brane.complex
            twice = hom_differential(hom_differential(random_homotopy(rng, brane), c, c), c, c)
            assert hom_is_zero(twice, exact)

    def test_matrix_square_is_zero(self, exact):
        """Consecutive δ_H matrices compose to zero."""
        rng = np.random.default_rng(5)
        c = random_brane(rng, exact, g=1).complex
        for m in (-2, -1, 0):
            first = differential_matrix(c, c, m)
            second = differential_matrix(c, c, m + 1)
            assert exact.is_zero(exact.matmul(second, first))

    def test_identity_is_closed(self, exact):
        """The identity endomorphism is a degree 0 cocycle."""
        c = _contractible(exact)
        identity = HomElement(0, {p: (exact.eye(c.rank(p)),) for p in c.degrees})
        assert hom_is_zero(hom_differential(identity, c, c), exact)

    def test_bad_block_shape(self, exact):
        """A block of the wrong size is rejected."""
        c = _contractible(exact)
        x = HomElement(0, {0: (exact.eye(2),)})
        with pytest.raises(DimensionMismatchError):
            hom_differential(x, c, c)

    def test_slot_count_checked(self, exact):
        """Every position must carry one block per slot."""
        c = _contractible(exact)
        x = HomElement(0, {0: (exact.eye(1),)}, slots=2)
        with pytest.raises(DimensionMismatchError):
            hom_differential(x, c, c)


class TestHomSpace:
    """Tests for flattened coordinates on Hom^m."""

    def test_dimension_counts_blocks(self, exact):
        """Hom^0 of ranks (1, 2) with itself has dimension 1 + 4, times slots."""
        c = MatrixComplex(exact, {0: 1, 1: 2})
        assert HomSpace(c, c, 0).dimension == 5
        assert HomSpace(c, c, 0, slots=3).dimension == 15
        assert HomSpace(c, c, 1).dimension == 2

    def test_flatten_unflatten(self, exact):
        """Unit elements flatten to the standard basis."""
        c = MatrixComplex(exact, {0: 1, 1: 2})
        space = HomSpace(c, c, -1, slots=2)
        for k, e in enumerate(space.basis()):
            col = space.flatten(e)
            rows = exact.to_rows(col)
            assert [int(exact.real_part(r[0])) for r in rows] == [int(i == k) for i in range(space.dimension)]


class TestHomCohomology:
    """Tests for H^m Hom(A, B)."""

    def test_contractible_has_no_endomorphisms(self, exact):
        """End of an acyclic complex has trivial cohomology in every degree."""
        c = _contractible(exact)
        for m in (-1, 0, 1):
            assert hom_cohomology(c, c, m).dimension == 0

    @pytest.mark.parametrize("seed", range(6))
    def test_kunneth_dimension(self, exact, seed):
        """dim H^m Hom(A, B) = Σ_p h^p(A) h^{p+m}(B)."""
        rng = np.random.default_rng(100 + seed)
        a = random_brane(rng, exact, g=1)
        b = random_brane(rng, exact, g=1)
        for m in (-1, 0, 1):
            expected = sum(
                h * b.cohomology.get(p + m, 0) for p, h in a.cohomology.items()
            )
            assert hom_cohomology(a.complex, b.complex, m).dimension == expected

    def test_representatives_are_cocycles(self, exact):
        """Every basis element returned is δ_H-closed."""
        rng = np.random.default_rng(21)
        brane = random_brane(rng, exact, g=2)
        c = brane.complex
        result = hom_cohomology(c, c, 0, slots=2)
        for element in result.basis:
            assert hom_is_zero(hom_differential(element, c, c), exact)

    def test_float_backend_agrees(self, exact, flt):
        """Both backends count the same dimension of H^0 End."""
        rng = np.random.default_rng(31)
        a = random_brane(rng, exact, g=1)
        rng = np.random.default_rng(31)
        b = random_brane(rng, flt, g=1)
        assert hom_cohomology(a.complex, a.complex, 0).dimension == \
            hom_cohomology(b.complex, b.complex, 0).dimension

    def test_change_of_basis_sweep(self, exact):
        """Conjugating every term by a unimodular matrix leaves dim H^m Hom(A, B) unchanged."""
        rng = np.random.default_rng(5151)
        for _ in range(200):
            a = random_brane(rng, exact, g=1, length=int(rng.integers(1, 4)))
            b = random_brane(rng, exact, g=1, length=int(rng.integers(1, 4)))
            a2, b2 = _change_basis(rng, a.complex), _change_basis(rng, b.complex)
            a2.require_valid()
            b2.require_valid()
            assert cohomology_dimensions(a2) == cohomology_dimensions(a.complex)
            for m in (-1, 0, 1):
                assert hom_cohomology(a2, b2, m).dimension == hom_cohomology(a.complex, b.complex, m).dimension

    def test_rank_nullity_sweep(self, exact):
        """dim Z^m = dim Hom^m - rank δ^m, and the kernel vectors are δ_H-closed."""
        rng = np.random.default_rng(6262)
        for _ in range(200):
            slots = int(rng.integers(1, 3))
            a = random_brane(rng, exact, g=1).complex
            b = random_brane(rng, exact, g=1).complex
            m = int(rng.integers(-1, 2))
            space = HomSpace(a, b, m, slots)
            d = differential_matrix(a, b, m, slots)
            kernel = kernel_basis(d, exact)
            assert len(kernel) == space.dimension - exact.rank(d)
            result = hom_cohomology(a, b, m, slots).result
            assert result.cocycle_dimension == len(kernel)
            assert result.coboundary_dimension == exact.rank(differential_matrix(a, b, m - 1, slots))
            for column in kernel:
                assert hom_is_zero(hom_differential(space.unflatten(column), a, b), exact)
