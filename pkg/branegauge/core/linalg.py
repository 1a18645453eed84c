"""
BraneGauge Linear Algebra

Two scalar backends behind one matrix interface:

- exact: Gaussian rationals, matrices are sympy ``DomainMatrix`` over ``QQ_I``
- float: complex128, matrices are numpy arrays, ranks decided by SVD

Dimension counts and existence decisions run on the exact backend; the
Yang-Mills solver runs on the float backend. Matrices are treated as
immutable values.
"""

from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import numpy as np
import scipy.linalg
import structlog
from sympy import QQ, QQ_I
from sympy.polys.matrices import DomainMatrix

from .errors import DimensionMismatchError


logger = structlog.get_logger(__name__)

DEFAULT_FLOAT_TOL = 1e-10
DEFAULT_RANK_GAP = 1e6


class Backend(str, Enum):
    """Scalar backend of a computation."""
    EXACT = "exact"
    FLOAT = "float"


def to_fraction(value: Any) -> Fraction:
    """
    Convert an integer, rational, decimal string or float to a Fraction.

    Accepts sympy/gmpy rationals (anything with numerator and denominator)
    and strings such as ``"3/4"`` or ``"-2"``.
    """
    if isinstance(value, (str, float)):
        return Fraction(value)
    try:
        return Fraction(int(value.numerator), int(value.denominator))
    except AttributeError:
        return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Render a rational as ``"a/b"`` (or ``"a"`` for integers)."""
    return str(Fraction(value))


def _qq(value: Any):
    frac = to_fraction(value)
    return QQ(frac.numerator, frac.denominator)


class MatrixAlgebra(ABC):
    """
    Matrix arithmetic over one scalar backend.

    Subclasses supply the primitive operations; block assembly, traces,
    metric pairings and quotient bases are shared.
    """

    backend: Backend
    tol: float

    # -- primitives -------------------------------------------------------

    @abstractmethod
    def scalar(self, value: Any) -> Any:
        """Coerce a number, ``(re, im)`` pair, rational string or backend scalar."""

    @abstractmethod
    def matrix(self, rows: Sequence[Sequence[Any]], cols: int | None = None) -> Any:
        """Build a matrix from row lists (``cols`` is needed when there are no rows)."""

    @abstractmethod
    def zeros(self, nrows: int, ncols: int) -> Any: ...

    @abstractmethod
    def eye(self, n: int) -> Any: ...

    @abstractmethod
    def shape(self, m: Any) -> tuple[int, int]: ...

    @abstractmethod
    def to_rows(self, m: Any) -> list[list[Any]]: ...

    @abstractmethod
    def matmul(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def neg(self, a: Any) -> Any: ...

    @abstractmethod
    def scale(self, c: Any, a: Any) -> Any: ...

    @abstractmethod
    def adjoint(self, a: Any) -> Any: ...

    @abstractmethod
    def rank(self, m: Any) -> int: ...

    @abstractmethod
    def kernel_basis(self, m: Any) -> Any:
        """Matrix whose columns are a basis of ker(m)."""

    @abstractmethod
    def image_basis(self, m: Any) -> Any:
        """Matrix whose columns are a basis of im(m)."""

    @abstractmethod
    def inverse(self, m: Any) -> Any: ...

    @abstractmethod
    def is_zero_scalar(self, s: Any) -> bool: ...

    @abstractmethod
    def conj(self, s: Any) -> Any: ...

    @abstractmethod
    def real_part(self, s: Any) -> Fraction | float: ...

    @abstractmethod
    def to_complex(self, s: Any) -> complex: ...

    @abstractmethod
    def is_positive_definite(self, h: Any) -> bool: ...

    # -- shared -----------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.backend is Backend.EXACT

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def to_numpy(self, m: Any) -> np.ndarray:
        rows, cols = self.shape(m)
        data = [[self.to_complex(e) for e in row] for row in self.to_rows(m)]
        return np.array(data, dtype=complex).reshape(rows, cols)

    def is_zero(self, m: Any) -> bool:
        return all(self.is_zero_scalar(e) for row in self.to_rows(m) for e in row)

    def equal(self, a: Any, b: Any) -> bool:
        if self.shape(a) != self.shape(b):
            return False
        return self.is_zero(self.sub(a, b))

    def block(self, grid: Sequence[Sequence[Any]]) -> Any:
        """Assemble a block matrix; every band must have consistent heights."""
        rows: list[list[Any]] = []
        for band in grid:
            parts = [self.to_rows(b) for b in band]
            height = self.shape(band[0])[0] if band else 0
            for part, b in zip(parts, band):
                if self.shape(b)[0] != height:
                    raise DimensionMismatchError("block heights differ within a band")
            for i in range(height):
                rows.append([e for part in parts for e in part[i]])
        ncols = sum(self.shape(b)[1] for b in grid[0]) if grid else 0
        return self.matrix(rows, cols=ncols)

    def hstack(self, mats: Sequence[Any], nrows: int) -> Any:
        if not mats:
            return self.zeros(nrows, 0)
        return self.block([list(mats)])

    def vstack(self, mats: Sequence[Any], ncols: int) -> Any:
        if not mats:
            return self.zeros(0, ncols)
        return self.block([[m] for m in mats])

    def extract(self, m: Any, row_idx: Sequence[int], col_idx: Sequence[int]) -> Any:
        rows = self.to_rows(m)
        return self.matrix([[rows[i][j] for j in col_idx] for i in row_idx], cols=len(col_idx))

    def columns(self, m: Any) -> list[Any]:
        nrows, ncols = self.shape(m)
        return [self.extract(m, range(nrows), [j]) for j in range(ncols)]

    def trace(self, m: Any) -> Any:
        nrows, ncols = self.shape(m)
        if nrows != ncols:
            raise DimensionMismatchError(f"trace of non-square {nrows}x{ncols} matrix")
        rows = self.to_rows(m)
        total = self.scalar(0)
        for i in range(nrows):
            total = total + rows[i][i]
        return total

    def commutator(self, a: Any, b: Any) -> Any:
        return self.sub(self.matmul(a, b), self.matmul(b, a))

    def metric_inner(self, a: Any, b: Any, h: Any = None) -> Any:
        """
        Hermitian pairing tr(A h⁻¹ B† h) of endomorphisms.

        With ``h`` the Gram matrix of a Hermitian metric this is the
        Frobenius pairing in any h-orthonormal frame.
        """
        if h is None:
            return self.trace(self.matmul(a, self.adjoint(b)))
        h_inv = self.inverse(h)
        return self.trace(self.matmul(self.matmul(a, h_inv), self.matmul(self.adjoint(b), h)))

    def norm_sq(self, a: Any, h: Any = None) -> Fraction | float:
        return self.real_part(self.metric_inner(a, a, h))

    def flatten(self, blocks: Sequence[Any]) -> Any:
        """Stack the row-major entries of ``blocks`` into one column."""
        entries = [e for b in blocks for row in self.to_rows(b) for e in row]
        return self.matrix([[e] for e in entries], cols=1)

    def unflatten(self, column: Any, shapes: Sequence[tuple[int, int]]) -> list[Any]:
        entries = [row[0] for row in self.to_rows(column)]
        blocks, offset = [], 0
        for nrows, ncols in shapes:
            chunk = entries[offset:offset + nrows * ncols]
            offset += nrows * ncols
            blocks.append(self.matrix(
                [chunk[i * ncols:(i + 1) * ncols] for i in range(nrows)], cols=ncols
            ))
        if offset != len(entries):
            raise DimensionMismatchError("column length does not match block shapes")
        return blocks

    def left_inverse(self, h: Any) -> Any:
        """(H†H)⁻¹H† for a matrix with independent columns."""
        nrows, ncols = self.shape(h)
        if ncols == 0:
            return self.zeros(0, nrows)
        h_adj = self.adjoint(h)
        return self.matmul(self.inverse(self.matmul(h_adj, h)), h_adj)

    def orthogonal_projector(self, basis: Any) -> Any:
        """Projector onto the orthogonal complement of span(basis)."""
        nrows, ncols = self.shape(basis)
        if ncols == 0:
            return self.eye(nrows)
        independent = self.image_basis(basis)
        return self.sub(self.eye(nrows), self.matmul(independent, self.left_inverse(independent)))

    def quotient_basis(self, cocycles: Any, coboundaries: Any) -> Any:
        """
        Representatives of span(cocycles) / span(coboundaries).

        Each representative is the orthogonal projection onto the complement
        of the coboundaries, i.e. the minimum-norm element of its coset.
        """
        projector = self.orthogonal_projector(coboundaries)
        return self.image_basis(self.matmul(projector, cocycles))

    def is_hermitian(self, h: Any) -> bool:
        return self.equal(h, self.adjoint(h))


class ExactAlgebra(MatrixAlgebra):
    """Gaussian-rational matrices (sympy ``DomainMatrix`` over ``QQ_I``)."""

    backend = Backend.EXACT
    tol = 0.0
    domain = QQ_I

    def scalar(self, value: Any) -> Any:
        if QQ_I.of_type(value):
            return value
        if isinstance(value, complex):
            re, im = Fraction(value.real), Fraction(value.imag)
        elif isinstance(value, (tuple, list)):
            re, im = value
        else:
            re, im = value, 0
        return QQ_I(_qq(re), _qq(im))

    def _wrap(self, rows: list[list[Any]], nrows: int, ncols: int) -> DomainMatrix:
        return DomainMatrix(rows, (nrows, ncols), QQ_I)

    def matrix(self, rows: Sequence[Sequence[Any]], cols: int | None = None) -> DomainMatrix:
        converted = [[self.scalar(v) for v in row] for row in rows]
        ncols = len(converted[0]) if converted else (cols or 0)
        if cols is not None and converted and ncols != cols:
            raise DimensionMismatchError(f"expected {cols} columns, got {ncols}")
        if any(len(row) != ncols for row in converted):
            raise DimensionMismatchError("ragged matrix rows")
        return self._wrap(converted, len(converted), ncols)

    def zeros(self, nrows: int, ncols: int) -> DomainMatrix:
        return self._wrap([[QQ_I.zero] * ncols for _ in range(nrows)], nrows, ncols)

    def eye(self, n: int) -> DomainMatrix:
        rows = [[QQ_I.one if i == j else QQ_I.zero for j in range(n)] for i in range(n)]
        return self._wrap(rows, n, n)

    def shape(self, m: DomainMatrix) -> tuple[int, int]:
        return tuple(m.shape)

    def to_rows(self, m: DomainMatrix) -> list[list[Any]]:
        nrows, ncols = m.shape
        if nrows == 0:
            return []
        if ncols == 0:
            return [[] for _ in range(nrows)]
        return [list(row) for row in m.to_list()]

    def matmul(self, a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
        (ar, ac), (br, bc) = a.shape, b.shape
        if ac != br:
            raise DimensionMismatchError(f"cannot multiply {ar}x{ac} by {br}x{bc}")
        if 0 in (ar, ac, bc):
            return self.zeros(ar, bc)
        return a * b

    def add(self, a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
        if a.shape != b.shape:
            raise DimensionMismatchError(f"cannot add {a.shape} and {b.shape}")
        if 0 in a.shape:
            return a
        return a + b

    def neg(self, a: DomainMatrix) -> DomainMatrix:
        if 0 in a.shape:
            return a
        return -a

    def scale(self, c: Any, a: DomainMatrix) -> DomainMatrix:
        if 0 in a.shape:
            return a
        return a * self.scalar(c)

    def adjoint(self, a: DomainMatrix) -> DomainMatrix:
        nrows, ncols = a.shape
        rows = self.to_rows(a)
        return self._wrap(
            [[self.conj(rows[i][j]) for i in range(nrows)] for j in range(ncols)], ncols, nrows
        )

    def rank(self, m: DomainMatrix) -> int:
        if 0 in m.shape:
            return 0
        return m.rank()

    def kernel_basis(self, m: DomainMatrix) -> DomainMatrix:
        nrows, ncols = m.shape
        if ncols == 0:
            return self.zeros(0, 0)
        rank = self.rank(m)
        if rank == 0:
            return self.eye(ncols)
        if rank == ncols:
            return self.zeros(ncols, 0)
        return m.nullspace().transpose()

    def image_basis(self, m: DomainMatrix) -> DomainMatrix:
        nrows, ncols = m.shape
        if 0 in m.shape or self.rank(m) == 0:
            return self.zeros(nrows, 0)
        _, pivots = m.rref()
        return self.extract(m, range(nrows), list(pivots))

    def inverse(self, m: DomainMatrix) -> DomainMatrix:
        if m.shape == (0, 0):
            return m
        return m.inv()

    def determinant(self, m: DomainMatrix) -> Any:
        if m.shape == (0, 0):
            return QQ_I.one
        return m.det()

    def is_zero_scalar(self, s: Any) -> bool:
        return not s

    def conj(self, s: Any) -> Any:
        return QQ_I(s.x, -s.y)

    def real_part(self, s: Any) -> Fraction:
        return to_fraction(s.x)

    def imag_part(self, s: Any) -> Fraction:
        return to_fraction(s.y)

    def to_complex(self, s: Any) -> complex:
        return complex(float(s.x), float(s.y))

    def is_positive_definite(self, h: DomainMatrix) -> bool:
        # Sylvester: every leading principal minor of a Hermitian matrix is real and positive.
        if not self.is_hermitian(h):
            return False
        n = h.shape[0]
        for k in range(1, n + 1):
            minor = self.determinant(self.extract(h, range(k), range(k)))
            if minor.y != 0 or self.real_part(minor) <= 0:
                return False
        return True


class FloatAlgebra(MatrixAlgebra):
    """complex128 matrices with SVD rank decisions."""

    backend = Backend.FLOAT

    def __init__(self, tol: float = DEFAULT_FLOAT_TOL, rank_gap: float = DEFAULT_RANK_GAP):
        self.tol = tol
        self.rank_gap = rank_gap

    def scalar(self, value: Any) -> complex:
        if hasattr(value, "x") and hasattr(value, "y"):
            return complex(float(value.x), float(value.y))
        if isinstance(value, (tuple, list)):
            re, im = value
            return complex(float(to_fraction(re)), float(to_fraction(im)))
        if isinstance(value, str):
            return complex(float(Fraction(value)))
        return complex(value)

    def matrix(self, rows: Sequence[Sequence[Any]], cols: int | None = None) -> np.ndarray:
        converted = [[self.scalar(v) for v in row] for row in rows]
        ncols = len(converted[0]) if converted else (cols or 0)
        if any(len(row) != ncols for row in converted):
            raise DimensionMismatchError("ragged matrix rows")
        return np.array(converted, dtype=complex).reshape(len(converted), ncols)

    def zeros(self, nrows: int, ncols: int) -> np.ndarray:
        return np.zeros((nrows, ncols), dtype=complex)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=complex)

    def shape(self, m: np.ndarray) -> tuple[int, int]:
        return tuple(m.shape)

    def to_rows(self, m: np.ndarray) -> list[list[complex]]:
        return [[complex(e) for e in row] for row in m]

    def to_numpy(self, m: np.ndarray) -> np.ndarray:
        return np.asarray(m, dtype=complex)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
        return a @ b

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise DimensionMismatchError(f"cannot add {a.shape} and {b.shape}")
        return a + b

    def neg(self, a: np.ndarray) -> np.ndarray:
        return -a

    def scale(self, c: Any, a: np.ndarray) -> np.ndarray:
        return self.scalar(c) * a

    def adjoint(self, a: np.ndarray) -> np.ndarray:
        return a.conj().T

    def _svd_rank(self, singular: np.ndarray) -> int:
        if singular.size == 0:
            return 0
        threshold = self.tol * max(1.0, float(singular[0]))
        rank = int(np.sum(singular > threshold))
        if 0 < rank < singular.size:
            below = float(singular[rank])
            if below > 0.0 and float(singular[rank - 1]) / below < self.rank_gap:
                logger.warning(
                    "rank_gap_borderline",
                    rank=rank,
                    kept=float(singular[rank - 1]),
                    dropped=below,
                )
        return rank

    def rank(self, m: np.ndarray) -> int:
        if 0 in m.shape:
            return 0
        return self._svd_rank(scipy.linalg.svd(m, compute_uv=False))

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        nrows, ncols = m.shape
        if ncols == 0:
            return self.zeros(0, 0)
        if nrows == 0:
            return self.eye(ncols)
        _, singular, vh = scipy.linalg.svd(m, full_matrices=True)
        rank = self._svd_rank(singular)
        return vh[rank:].conj().T

    def image_basis(self, m: np.ndarray) -> np.ndarray:
        nrows, ncols = m.shape
        if 0 in m.shape:
            return self.zeros(nrows, 0)
        u, singular, _ = scipy.linalg.svd(m, full_matrices=False)
        return u[:, :self._svd_rank(singular)]

    def inverse(self, m: np.ndarray) -> np.ndarray:
        if m.shape == (0, 0):
            return m
        return scipy.linalg.inv(m)

    def is_zero_scalar(self, s: Any) -> bool:
        return abs(s) <= self.tol

    def is_zero(self, m: np.ndarray) -> bool:
        return bool(np.all(np.abs(m) <= self.tol))

    def conj(self, s: Any) -> complex:
        return complex(s).conjugate()

    def real_part(self, s: Any) -> float:
        return float(complex(s).real)

    def to_complex(self, s: Any) -> complex:
        return complex(s)

    def is_positive_definite(self, h: np.ndarray) -> bool:
        if not self.is_hermitian(h):
            return False
        if h.shape[0] == 0:
            return True
        return bool(np.all(scipy.linalg.eigvalsh(h) > self.tol))


@lru_cache(maxsize=None)
def get_algebra(
    backend: Backend | str = Backend.EXACT,
    tol: float = DEFAULT_FLOAT_TOL,
    rank_gap: float = DEFAULT_RANK_GAP,
) -> MatrixAlgebra:
    """Shared algebra instance for a backend."""
    if Backend(backend) is Backend.EXACT:
        return ExactAlgebra()
    return FloatAlgebra(tol=tol, rank_gap=rank_gap)


def kernel_basis(m: Any, algebra: MatrixAlgebra | None = None) -> list[Any]:
    """
    Basis of ker(M) as a list of column vectors.

    Args:
        m: Matrix on either backend
        algebra: Backend of ``m`` (exact when omitted)

    Returns:
        Linearly independent columns spanning the kernel
    """
    algebra = algebra or get_algebra(Backend.EXACT)
    return algebra.columns(algebra.kernel_basis(m))
