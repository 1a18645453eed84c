"""
Shared builders for BraneGauge tests.

Random torus branes are assembled in split form (cohomology blocks plus
contractible pairs P_i --id--> Q_{i+1}) and optionally conjugated by integer
unimodular matrices, so cohomology dimensions are known in advance.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pytest

from branegauge.core.hom import HomElement
from branegauge.core.linalg import Backend, MatrixAlgebra, get_algebra
from branegauge.core.torus import ConnectionFamily, ConstantComplex, constant_complex


FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def to_algebra(arr: np.ndarray, algebra: MatrixAlgebra):
    arr = np.asarray(arr, dtype=complex)
    return algebra.matrix([[complex(v) for v in row] for row in arr], cols=arr.shape[1])


def gaussian_ints(rng: np.random.Generator, rows: int, cols: int, bound: int = 2) -> np.ndarray:
    re = rng.integers(-bound, bound + 1, size=(rows, cols))
    im = rng.integers(-bound, bound + 1, size=(rows, cols))
    return (re + 1j * im).astype(complex)


def antihermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    x = gaussian_ints(rng, n, n)
    return x - x.conj().T


def unimodular(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer matrix with determinant 1 and its integer inverse."""
    lower = np.tril(rng.integers(-1, 2, size=(n, n)), -1) + np.eye(n, dtype=int)
    upper = np.triu(rng.integers(-1, 2, size=(n, n)), 1) + np.eye(n, dtype=int)
    s = lower @ upper
    s_inv = np.round(np.linalg.inv(s)).astype(int) if n else np.zeros((0, 0), dtype=int)
    return s.astype(complex), s_inv.astype(complex)


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    offset = 0
    for b in blocks:
        k = b.shape[0]
        out[offset:offset + k, offset:offset + k] = b
        offset += k
    return out


@dataclass
class RandomBrane:
    complex: ConstantComplex
    connection: ConnectionFamily
    cohomology: dict[int, int]
    g: int


def random_brane(
    rng: np.random.Generator,
    algebra: MatrixAlgebra,
    g: int,
    length: int = 3,
    max_cohomology: int = 2,
    metric_compatible: bool = False,
    conjugate: bool = True,
) -> RandomBrane:
    """
    Constant complex with a compatible connection.

    F^i = H_i ⊕ Q_i ⊕ P_i with D^i mapping P_i identically onto Q_{i+1};
    ranks stay at most 4. With ``metric_compatible`` every block is
    antihermitian and no conjugation is applied.
    """
    h = [int(rng.integers(0, max_cohomology + 1)) for _ in range(length)]
    p = [int(rng.integers(0, 2)) if i < length - 1 else 0 for i in range(length)]
    q = [0] + p[:-1]
    ranks = [h[i] + q[i] + p[i] for i in range(length)]

    def block(n: int) -> np.ndarray:
        return antihermitian(rng, n) if metric_compatible else gaussian_ints(rng, n, n)

    pair_blocks = [[block(p[i]) for _ in range(g)] for i in range(length)]
    connection = {}
    for i in range(length):
        connection[i] = [
            block_diag(block(h[i]), pair_blocks[i - 1][k] if i else np.zeros((0, 0)), pair_blocks[i][k])
            for k in range(g)
        ]
    differentials = {}
    for i in range(length - 1):
        d = np.zeros((ranks[i + 1], ranks[i]), dtype=complex)
        for t in range(p[i]):
            d[h[i + 1] + t, h[i] + q[i] + t] = 1
        differentials[i] = d

    if conjugate and not metric_compatible:
        frames = [unimodular(rng, r) for r in ranks]
        differentials = {i: frames[i + 1][0] @ d @ frames[i][1] for i, d in differentials.items()}
        connection = {
            i: [frames[i][0] @ a @ frames[i][1] for a in blocks] for i, blocks in connection.items()
        }

    complex_ = constant_complex(
        algebra,
        {i: r for i, r in enumerate(ranks)},
        {i: to_algebra(d, algebra) for i, d in differentials.items() if d.size},
    )
    family = ConnectionFamily(g, {
        i: tuple(to_algebra(a, algebra) for a in blocks) for i, blocks in connection.items()
    })
    return RandomBrane(complex_, family, {i: h[i] for i in range(length) if ranks[i]}, g)


def random_homotopy(rng: np.random.Generator, brane: RandomBrane) -> HomElement:
    """Random element of Hom^{-1}(F, F) with one block per coframe slot."""
    c = brane.complex
    la = c.algebra
    components = {}
    for i in c.degrees:
        if c.rank(i - 1):
            components[i] = tuple(
                to_algebra(gaussian_ints(rng, c.rank(i - 1), c.rank(i)), la) for _ in range(brane.g)
            )
    return HomElement(-1, components, brane.g)


@pytest.fixture
def exact():
    return get_algebra(Backend.EXACT)


@pytest.fixture
def flt():
    return get_algebra(Backend.FLOAT)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
