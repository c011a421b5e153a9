"""Dense bit-packed linear algebra over GF(2).

A :class:`BitMatrix` stores each row as little-endian ``uint64`` words; bits
past ``cols`` are kept at zero.  Vectors travel as 1-D ``uint8`` arrays of
zeros and ones (``BitVector``).

Kronecker products put the left factor on the slowest-varying index: entry
``((i1, i2), (j1, j2))`` of ``kron(a, b)`` sits at row ``i1 * b.rows + i2``
and column ``j1 * b.cols + j2``.  Block layouts in :mod:`multicss.construct`
rely on this ordering.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from multicss import _kernels

BitVector = np.ndarray

WORD = 64


def _nwords(cols: int) -> int:
    return (cols + WORD - 1) // WORD


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into ``uint64`` words per row."""
    dense = np.asarray(dense, dtype=np.uint8)
    rows, cols = dense.shape
    nw = _nwords(cols)
    if rows == 0 or nw == 0:
        return np.zeros((rows, nw), dtype=np.uint64)
    padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False).reshape(rows, nw)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    as_bytes = np.ascontiguousarray(words, dtype="<u8").view(np.uint8).reshape(rows, -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little", count=cols)


class BitMatrix:
    """Immutable dense matrix over GF(2)."""

    __slots__ = ("rows", "cols", "words", "_echelon")

    def __init__(self, words: np.ndarray, rows: int, cols: int):
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (rows, _nwords(cols)):
            raise ValueError(f"packed shape {words.shape} does not fit a {rows}x{cols} matrix")
        words = words.copy()
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words
        self._echelon: RowSpace | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dense(cls, dense) -> BitMatrix:
        arr = np.asarray(dense)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        return cls(pack_rows(arr.astype(np.uint8)), arr.shape[0], arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(np.zeros((rows, _nwords(cols)), dtype=np.uint64), rows, cols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, vectors: Iterable[BitVector], cols: int) -> BitMatrix:
        vs = [np.asarray(v, dtype=np.uint8) for v in vectors]
        if not vs:
            return cls.zeros(0, cols)
        return cls.from_dense(np.vstack(vs))

    @classmethod
    def vstack(cls, mats: Iterable[BitMatrix], cols: int | None = None) -> BitMatrix:
        mats = list(mats)
        if not mats:
            if cols is None:
                raise ValueError("vstack of nothing needs an explicit column count")
            return cls.zeros(0, cols)
        cols = mats[0].cols if cols is None else cols
        for m in mats:
            if m.cols != cols:
                raise ValueError(f"cannot stack {m.shape} under {cols} columns")
        return cls(np.vstack([m.words for m in mats]), sum(m.rows for m in mats), cols)

    @classmethod
    def hstack(cls, mats: Iterable[BitMatrix], rows: int | None = None) -> BitMatrix:
        mats = list(mats)
        if not mats:
            if rows is None:
                raise ValueError("hstack of nothing needs an explicit row count")
            return cls.zeros(rows, 0)
        rows = mats[0].rows if rows is None else rows
        for m in mats:
            if m.rows != rows:
                raise ValueError(f"cannot place {m.shape} beside {rows} rows")
        return cls.from_dense(np.hstack([m.to_dense() for m in mats]))

    # -- views ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> np.ndarray:
        return unpack_rows(self.words, self.cols)

    def row(self, i: int) -> BitVector:
        return unpack_rows(self.words[i : i + 1], self.cols)[0]

    def __iter__(self) -> Iterator[BitVector]:
        dense = self.to_dense()
        return iter(dense)

    def __len__(self) -> int:
        return self.rows

    @property
    def T(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0).astype(np.int64)

    def nnz(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return mat_mul(self, other)

    def echelon(self) -> RowSpace:
        if self._echelon is None:
            self._echelon = RowSpace(self)
        return self._echelon


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Product over GF(2), accumulated by XOR-ing packed rows of ``b``."""
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = np.zeros((a.rows, b.words.shape[1]), dtype=np.uint64)
    if a.rows and b.cols:
        da = a.to_dense().astype(bool)
        for k in range(a.cols):
            sel = da[:, k]
            if sel.any():
                out[sel] ^= b.words[k]
    return BitMatrix(out, a.rows, b.cols)


def kron(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return BitMatrix.from_dense(np.kron(a.to_dense(), b.to_dense()))


def kron_all(factors: Iterable[BitMatrix]) -> BitMatrix:
    """Kronecker product of several factors, first factor slowest-varying."""
    dense = np.ones((1, 1), dtype=np.uint8)
    for f in factors:
        dense = np.kron(dense, f.to_dense())
    return BitMatrix.from_dense(dense)


def _reduce(a: BitMatrix, full: bool) -> tuple[np.ndarray, np.ndarray]:
    w = np.array(a.words, dtype=np.uint64, copy=True)
    order = np.arange(a.cols, dtype=np.int64)
    pivots = _kernels.eliminate(w, order, full)
    return w[: len(pivots)], pivots


def rank(a: BitMatrix) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    return len(_reduce(a, full=False)[1])


def rref(a: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form (nonzero rows only) and its pivot columns."""
    w, pivots = _reduce(a, full=True)
    return BitMatrix(w, len(pivots), a.cols), [int(p) for p in pivots]


def kernel_basis(a: BitMatrix) -> BitMatrix:
    """Basis of the right null space ``{v : a v = 0}``, one vector per row."""
    n = a.cols
    if a.rows == 0:
        return BitMatrix.identity(n)
    reduced, pivots = rref(a)
    free = np.setdiff1d(np.arange(n), np.asarray(pivots, dtype=np.int64))
    basis = np.zeros((len(free), n), dtype=np.uint8)
    basis[np.arange(len(free)), free] = 1
    if pivots:
        basis[:, pivots] = reduced.to_dense()[:, free].T
    return BitMatrix.from_dense(basis)


def independent_rows(a: BitMatrix) -> list[int]:
    """Indices of the rows kept by a greedy, in-order independence scan."""
    if a.rows == 0:
        return []
    return rref(a.T)[1]


class RowSpace:
    """Row echelon form of a matrix, kept for repeated membership queries."""

    def __init__(self, a: BitMatrix):
        reduced, pivots = rref(a)
        self.cols = a.cols
        self.rank = len(pivots)
        self._rows = np.array(reduced.words)
        self._pivot_word = np.array([p >> 6 for p in pivots], dtype=np.int64)
        self._pivot_bit = np.array([np.uint64(1) << np.uint64(p & 63) for p in pivots], dtype=np.uint64)

    def reduce(self, v: BitVector) -> np.ndarray:
        """Packed remainder of ``v`` after clearing every pivot column."""
        v = np.asarray(v, dtype=np.uint8)
        if v.shape != (self.cols,):
            raise ValueError(f"vector of length {v.shape[0] if v.ndim else 0} does not match {self.cols} columns")
        w = pack_rows(v[None, :])[0]
        for i in range(self.rank):
            if w[self._pivot_word[i]] & self._pivot_bit[i]:
                w ^= self._rows[i]
        return w

    def contains(self, v: BitVector) -> bool:
        return not self.reduce(v).any()


def in_row_space(a: BitMatrix, v: BitVector) -> bool:
    return a.echelon().contains(v)


def mat_vec(a: BitMatrix, v: BitVector) -> BitVector:
    v = np.asarray(v, dtype=np.uint8)
    if v.shape != (a.cols,):
        raise ValueError(f"vector of length {v.shape[0] if v.ndim else 0} does not match {a.cols} columns")
    pv = pack_rows(v[None, :])[0]
    return (np.bitwise_count(a.words & pv).sum(axis=1) & 1).astype(np.uint8)
