"""
Toeplitz and block-Toeplitz operators with FFT matrix-vector products.

An ``n x n`` Toeplitz matrix is stored by its first column and first row
and embedded into a circulant of length ``L`` (the smallest power of two
``>= 2n``). The circulant is diagonalized by the DFT, so a product costs two
length-``L`` FFTs and a pointwise multiply::

    C = F^{-1} diag(F c) F

The spectrum ``F c`` is computed once per operator and cached.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Protocol, runtime_checkable

import numpy as np

from .errors import SingularityError, SizeError
from .fft import fft, next_power_of_two

__all__ = ['LinearOperator', 'DenseOperator', 'Structure', 'ToeplitzOperator',
           'CirculantSpectrum', 'BlockTridiagonalToeplitzOperator',
           'embed_circulant', 'toeplitz_matvec', 'block_matvec',
           'lower_toeplitz_forward_solve', 'as_operator']


@runtime_checkable
class LinearOperator(Protocol):
    """Anything with a dimension and a deterministic ``apply``."""

    dim: int

    def apply(self, x):
        ...


class DenseOperator:
    """Wraps an explicit square matrix."""

    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise SizeError(f"expected a square matrix, got shape {matrix.shape}")
        self.matrix = matrix
        self.dim = matrix.shape[0]

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise SizeError(f"vector of length {x.shape[-1]} for operator of "
                            f"dimension {self.dim}")
        return self.matrix @ x if x.ndim == 1 else x @ self.matrix.T


def as_operator(op):
    if isinstance(op, np.ndarray):
        return DenseOperator(op)
    if not hasattr(op, 'apply') or not hasattr(op, 'dim'):
        raise TypeError(f"{type(op).__name__} does not provide dim/apply")
    return op


class Structure(Enum):
    GENERAL = 'general'
    SYMMETRIC = 'symmetric'
    LOWER_TRIANGULAR = 'lower_triangular'


@dataclass(frozen=True)
class CirculantSpectrum:
    """DFT of the first column of a circulant embedding of a Toeplitz matrix."""
    n: int
    eigenvalues: np.ndarray

    @property
    def L(self):
        return len(self.eigenvalues)

    def first_column(self):
        """Recover the (real) circulant first column from the spectrum."""
        return fft(self.eigenvalues, 'inverse').real

    def dense(self):
        """Explicit ``L x L`` circulant. Meant for small test cases."""
        c = self.first_column()
        idx = (np.arange(self.L)[:, None] - np.arange(self.L)[None, :]) % self.L
        return c[idx]


@dataclass(frozen=True, eq=False)
class ToeplitzOperator:
    """
    ``n x n`` Toeplitz matrix with entry ``(i, j)`` equal to
    ``first_row[j - i]`` for ``j >= i`` and ``first_col[i - j]`` otherwise.

    Use the :meth:`symmetric`, :meth:`lower_triangular` and :meth:`general`
    constructors rather than the raw initializer.
    """
    first_col: np.ndarray
    first_row: np.ndarray
    structure: Structure = Structure.GENERAL

    def __post_init__(self):
        col = np.array(self.first_col, dtype=float).ravel()
        row = np.array(self.first_row, dtype=float).ravel()
        if len(col) == 0:
            raise SizeError("Toeplitz operator needs at least one entry")
        if len(col) != len(row):
            raise SizeError(f"first column has {len(col)} entries, first row "
                            f"has {len(row)}")
        if col[0] != row[0]:
            raise ValueError("first column and first row disagree on the "
                             "diagonal entry")
        if self.structure is Structure.SYMMETRIC and not np.array_equal(col, row):
            raise ValueError("symmetric Toeplitz operator needs first_col == first_row")
        if self.structure is Structure.LOWER_TRIANGULAR and np.any(row[1:] != 0):
            raise ValueError("lower triangular Toeplitz operator has a nonzero "
                             "first row past the diagonal")
        col.setflags(write=False)
        row.setflags(write=False)
        object.__setattr__(self, 'first_col', col)
        object.__setattr__(self, 'first_row', row)

    @classmethod
    def symmetric(cls, first_col):
        col = np.asarray(first_col, dtype=float)
        return cls(col, col.copy(), Structure.SYMMETRIC)

    @classmethod
    def lower_triangular(cls, first_col):
        col = np.asarray(first_col, dtype=float)
        row = np.zeros_like(col)
        row[:1] = col[:1]
        return cls(col, row, Structure.LOWER_TRIANGULAR)

    @classmethod
    def general(cls, first_col, first_row):
        return cls(first_col, first_row, Structure.GENERAL)

    @classmethod
    def identity(cls, n):
        col = np.zeros(n)
        col[0] = 1.0
        return cls.symmetric(col)

    @property
    def n(self):
        return len(self.first_col)

    @property
    def dim(self):
        return self.n

    def entry(self, i, j):
        return self.first_row[j - i] if j >= i else self.first_col[i - j]

    def dense(self):
        n = self.n
        k = np.arange(n)[None, :] - np.arange(n)[:, None]
        return np.where(k >= 0, self.first_row[np.abs(k)], self.first_col[np.abs(k)])

    def scaled(self, alpha):
        return ToeplitzOperator(alpha * self.first_col, alpha * self.first_row,
                                self.structure)

    @cached_property
    def spectrum(self):
        return embed_circulant(self)

    def apply(self, x):
        return toeplitz_matvec(self.spectrum, x)

    matvec = apply


def embed_circulant(t):
    """
    Circulant embedding of ``t`` and its DFT.

    The circulant first column is ``[a_0, a_-1, ..., a_-(n-1), 0, ..., 0,
    a_(n-1), ..., a_1]`` of length ``L = next_power_of_two(2n)``.
    """
    n = t.n
    L = next_power_of_two(2 * n)
    c = np.zeros(L)
    c[:n] = t.first_col
    if n > 1:
        c[L - n + 1:] = t.first_row[:0:-1]
    eig = fft(c)
    eig.setflags(write=False)
    return CirculantSpectrum(n, eig)


def toeplitz_matvec(spec, x):
    """
    Product of the embedded Toeplitz matrix with ``x``.

    ``x`` may carry leading batch axes; the product is taken along the last
    axis.
    """
    x = np.asarray(x, dtype=float)
    n = spec.n
    if x.ndim == 0 or x.shape[-1] != n:
        raise SizeError(f"vector of length {x.shape[-1] if x.ndim else 0} "
                        f"for Toeplitz operator of dimension {n}")
    padded = np.zeros(x.shape[:-1] + (spec.L,))
    padded[..., :n] = x
    y = fft(spec.eigenvalues * fft(padded), 'inverse')
    return y[..., :n].real.copy()


@dataclass(frozen=True, eq=False)
class BlockTridiagonalToeplitzOperator:
    """
    Block tridiagonal matrix with ``m_blocks`` identical diagonal blocks
    ``diag_block`` and off-diagonal blocks ``off_block_scale * I``.
    """
    m_blocks: int
    diag_block: ToeplitzOperator
    off_block_scale: float

    def __post_init__(self):
        if self.m_blocks < 1:
            raise SizeError("need at least one block row")

    @property
    def block_dim(self):
        return self.diag_block.n

    @property
    def dim(self):
        return self.m_blocks * self.block_dim

    def apply(self, x):
        return block_matvec(self, x)

    def dense(self):
        T = self.diag_block.dense()
        nb = self.block_dim
        out = np.zeros((self.dim, self.dim))
        eye = self.off_block_scale * np.eye(nb)
        for i in range(self.m_blocks):
            s = slice(i * nb, (i + 1) * nb)
            out[s, s] = T
            if i + 1 < self.m_blocks:
                s1 = slice((i + 1) * nb, (i + 2) * nb)
                out[s, s1] = eye
                out[s1, s] = eye
        return out


def block_matvec(op, x):
    """``y_i = T x_i + beta (x_{i-1} + x_{i+1})`` over the block segments."""
    x = np.asarray(x, dtype=float)
    if x.shape != (op.dim,):
        raise SizeError(f"vector of shape {x.shape} for block operator of "
                        f"dimension {op.dim}")
    blocks = x.reshape(op.m_blocks, op.block_dim)
    y = toeplitz_matvec(op.diag_block.spectrum, blocks)
    if op.m_blocks > 1 and op.off_block_scale != 0.0:
        y[1:] += op.off_block_scale * blocks[:-1]
        y[:-1] += op.off_block_scale * blocks[1:]
    return y.ravel()


def lower_toeplitz_forward_solve(t, b):
    """Forward substitution for a lower triangular Toeplitz system, O(n^2)."""
    if t.structure is not Structure.LOWER_TRIANGULAR and np.any(t.first_row[1:]):
        raise ValueError("operator is not lower triangular")
    b = np.asarray(b, dtype=float)
    n = t.n
    if b.shape != (n,):
        raise SizeError(f"right-hand side of shape {b.shape} for dimension {n}")
    d = t.first_col[0]
    if d == 0.0:
        raise SingularityError("zero diagonal in triangular Toeplitz system")
    col = t.first_col
    x = np.empty(n)
    for i in range(n):
        # row i: sum_{j<i} a_{i-j} x_j + a_0 x_i = b_i
        acc = np.dot(col[i:0:-1], x[:i]) if i else 0.0
        x[i] = (b[i] - acc) / d
    return x
