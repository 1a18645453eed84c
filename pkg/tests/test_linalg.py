"""
Tests for the matrix backends.
"""

from fractions import Fraction

import numpy as np
import pytest

from branegauge.core.errors import DimensionMismatchError
from branegauge.core.linalg import (
    Backend,
    FloatAlgebra,
    format_rational,
    get_algebra,
    kernel_basis,
    to_fraction,
)


class TestConversions:
    """Tests for scalar helpers."""

    @pytest.mark.parametrize("value, expected", [
        ("3/4", Fraction(3, 4)),
        ("-2", Fraction(-2)),
        (0.5, Fraction(1, 2)),
        (7, Fraction(7)),
    ])
    def test_to_fraction(self, value, expected):
        """Strings, floats and ints convert exactly."""
        assert to_fraction(value) == expected

    def test_format_rational(self):
        """Rationals render as a/b, integers without a denominator."""
        assert format_rational(Fraction(-6, 4)) == "-3/2"
        assert format_rational(Fraction(4, 2)) == "2"

    def test_get_algebra_is_shared(self):
        """The same backend returns the same instance."""
        assert get_algebra(Backend.EXACT) is get_algebra("exact")
        assert isinstance(get_algebra(Backend.FLOAT), FloatAlgebra)


class TestKernelBasis:
    """Tests for kernel_basis on both backends."""

    def test_zero_matrix_kernel_is_everything(self, exact):
        """ker of the 2x3 zero matrix has dimension 3."""
        assert len(kernel_basis(exact.zeros(2, 3), exact)) == 3

    def test_identity_has_trivial_kernel(self, exact):
        """ker(I_3) = 0."""
        assert kernel_basis(exact.eye(3), exact) == []

    def test_rank_one_row(self, exact):
        """ker [1 1] is spanned by one vector annihilated by the row."""
        m = exact.matrix([[1, 1]])
        basis = kernel_basis(m, exact)
        assert len(basis) == 1
        assert exact.is_zero(exact.matmul(m, basis[0]))

    def test_zero_columns(self, exact):
        """A matrix with no columns has an empty kernel."""
        assert kernel_basis(exact.zeros(3, 0), exact) == []

    def test_gaussian_entries(self, exact):
        """Kernels are exact over the Gaussian rationals."""
        m = exact.matrix([[1, (0, 1)], [(0, 1), -1]])
        # second row is i times the first
        basis = kernel_basis(m, exact)
        assert exact.rank(m) == 1
        assert len(basis) == 1
        for v in basis:
            assert exact.is_zero(exact.matmul(m, v))

    def test_float_rank_with_tolerance(self, flt):
        """Singular values below tolerance are dropped."""
        m = np.array([[1.0, 0.0], [0.0, 1e-14]], dtype=complex)
        assert flt.rank(m) == 1
        assert len(kernel_basis(m, flt)) == 1


class TestExactAlgebra:
    """Tests for exact matrix operations."""

    def test_matmul_shape_mismatch(self, exact):
        """Multiplying incompatible shapes raises."""
        with pytest.raises(DimensionMismatchError):
            exact.matmul(exact.eye(2), exact.eye(3))

    def test_empty_products(self, exact):
        """Products through a zero-dimensional space are zero matrices."""
        product = exact.matmul(exact.zeros(2, 0), exact.zeros(0, 3))
        assert exact.shape(product) == (2, 3)
        assert exact.is_zero(product)

    def test_adjoint_conjugates(self, exact):
        """Adjoint transposes and conjugates."""
        m = exact.matrix([[(1, 2), 3]])
        adj = exact.adjoint(m)
        assert exact.shape(adj) == (2, 1)
        assert exact.equal(adj, exact.matrix([[(1, -2)], [3]]))

    def test_metric_inner_identity_is_frobenius(self, exact):
        """With h = I the pairing is tr(A B†)."""
        a = exact.matrix([[1, (0, 1)], [0, 2]])
        assert exact.norm_sq(a) == Fraction(6)
        assert exact.norm_sq(a, exact.eye(2)) == Fraction(6)

    def test_metric_inner_is_frame_independent(self, exact):
        """‖S A S⁻¹‖² in the metric S^{-†} S⁻¹ equals ‖A‖²."""
        a = exact.matrix([[1, 2], [0, 3]])
        s = exact.matrix([[1, 1], [0, 1]])
        s_inv = exact.inverse(s)
        moved = exact.matmul(exact.matmul(s, a), s_inv)
        h = exact.matmul(exact.adjoint(s_inv), s_inv)
        assert exact.norm_sq(moved, h) == exact.norm_sq(a)

    def test_positive_definite(self, exact):
        """Sylvester's criterion on small Hermitian matrices."""
        assert exact.is_positive_definite(exact.matrix([[2, (0, 1)], [(0, -1), 2]]))
        assert not exact.is_positive_definite(exact.matrix([[1, 2], [2, 1]]))
        assert not exact.is_positive_definite(exact.matrix([[1, 1], [0, 1]]))

    def test_quotient_basis_is_orthogonal_to_coboundaries(self, exact):
        """Representatives are orthogonal to the subspace being divided out."""
        cocycles = exact.eye(3)
        coboundaries = exact.matrix([[1], [1], [0]])
        reps = exact.quotient_basis(cocycles, coboundaries)
        assert exact.shape(reps) == (3, 2)
        assert exact.is_zero(exact.matmul(exact.adjoint(coboundaries), reps))

    def test_block_and_unflatten(self, exact):
        """Flattening then unflattening recovers the blocks."""
        a, b = exact.matrix([[1, 2]]), exact.matrix([[3], [4]])
        col = exact.flatten([a, b])
        back = exact.unflatten(col, [(1, 2), (2, 1)])
        assert exact.equal(back[0], a) and exact.equal(back[1], b)

    def test_unflatten_rejects_wrong_length(self, exact):
        """A column that does not fit the shapes raises."""
        with pytest.raises(DimensionMismatchError):
            exact.unflatten(exact.zeros(3, 1), [(1, 1)])


class TestBackendsAgree:
    """Exact and float ranks agree on well-conditioned integer matrices."""

    def test_random_ranks(self, exact, flt):
        """Rank of random low-rank integer products matches across backends."""
        rng = np.random.default_rng(7)
        for _ in range(50):
            k = int(rng.integers(0, 4))
            m = rng.integers(-3, 4, size=(4, k)) @ rng.integers(-3, 4, size=(k, 5))
            rows = m.tolist()
            e = exact.matrix(rows)
            f = flt.matrix(rows)
            assert exact.rank(e) == flt.rank(f) == np.linalg.matrix_rank(m)
