"""Bit-packed linear algebra over GF(2) and the combinatorial helpers around it.

Vectors are Python integers: bit ``i`` of the integer is coordinate ``i``.
Serialized, that is LSB-first within bytes, bytes in little-endian order,
which is also the on-disk layout.  Matrices are tuples of such row integers.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels


@dataclass(frozen=True)
class SystemParams:
    """Public parameters ``(q, n, k, w, ell_k)``; ``q`` is always 2."""

    n: int
    k: int
    w: int
    ell_k: int = 256
    lam: int = 0
    q: int = field(default=2, repr=False)

    def __post_init__(self):
        if self.q != 2:
            raise ValueError("only binary codes are supported (q = 2)")
        if not 0 < self.k < self.n:
            raise ValueError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        if not 0 <= self.w <= self.n:
            raise ValueError(f"need 0 <= w <= n, got w={self.w}, n={self.n}")
        if self.ell_k < 1:
            raise ValueError("ell_k must be positive")

    @property
    def r(self) -> int:
        return self.n - self.k


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, 0)

    @classmethod
    def from_str(cls, s: str) -> BitVector:
        """Parse ``"1000110"``; the first character is coordinate 0."""
        s = s.replace(" ", "")
        return cls(len(s), int(s[::-1], 2) if s else 0)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        bits = 0
        for i in support:
            bits |= 1 << i
        return cls(length, bits)

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> BitVector:
        if len(data) != (length + 7) // 8:
            raise ValueError(f"expected {(length + 7) // 8} bytes for {length} bits, got {len(data)}")
        return cls(length, int.from_bytes(data, "little"))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> BitVector:
        arr = np.asarray(arr, dtype=np.uint8)
        packed = np.packbits(arr, bitorder="little")
        return cls(arr.shape[0], int.from_bytes(packed.tobytes(), "little"))

    def to_bytes(self) -> bytes:
        return self.bits.to_bytes((self.length + 7) // 8, "little")

    def to_array(self) -> np.ndarray:
        raw = np.frombuffer(self.to_bytes(), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little", count=self.length)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __xor__(self, other: BitVector) -> BitVector:
        return vec_add(self, other)

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.length))

    def concat(self, other: BitVector) -> BitVector:
        """``self || other``: ``other`` occupies the high coordinates."""
        return BitVector(self.length + other.length, self.bits | (other.bits << self.length))

    def slice(self, start: int, stop: int) -> BitVector:
        return BitVector(stop - start, (self.bits >> start) & ((1 << (stop - start)) - 1))


@dataclass(frozen=True)
class BitMatrix:
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        limit = 1 << self.cols
        if any(r < 0 or r >= limit for r in self.data):
            raise ValueError("row has bits beyond column count")

    @classmethod
    def from_strs(cls, rows: Sequence[str]) -> BitMatrix:
        vecs = [BitVector.from_str(r) for r in rows]
        cols = vecs[0].length if vecs else 0
        if any(v.length != cols for v in vecs):
            raise ValueError("ragged rows")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_vectors(cls, vecs: Sequence[BitVector], cols: Optional[int] = None) -> BitMatrix:
        if cols is None:
            cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise ValueError("ragged rows")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def identity(cls, k: int) -> BitMatrix:
        return cls(k, k, tuple(1 << i for i in range(k)))

    @classmethod
    def from_words(cls, words: np.ndarray, cols: int) -> BitMatrix:
        words = np.ascontiguousarray(words, dtype="<u8")
        nbytes = (cols + 7) // 8
        raw = words.view(np.uint8).reshape(words.shape[0], -1)[:, :nbytes]
        return cls(words.shape[0], cols, tuple(int.from_bytes(row.tobytes(), "little") for row in raw))

    @classmethod
    def from_dense(cls, arr: np.ndarray) -> BitMatrix:
        arr = np.asarray(arr, dtype=np.uint8)
        packed = np.packbits(arr, axis=1, bitorder="little")
        return cls(arr.shape[0], arr.shape[1], tuple(int.from_bytes(row.tobytes(), "little") for row in packed))

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def row_bytes(self) -> int:
        return (self.cols + 7) // 8

    def to_words(self) -> np.ndarray:
        nw = (self.cols + 63) // 64
        buf = b"".join(r.to_bytes(nw * 8, "little") for r in self.data)
        return np.frombuffer(buf, dtype="<u8").reshape(self.rows, nw).astype(np.uint64)

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        raw = np.frombuffer(self.to_bytes(), dtype=np.uint8).reshape(self.rows, self.row_bytes())
        return np.unpackbits(raw, axis=1, bitorder="little", count=self.cols)

    def to_bytes(self) -> bytes:
        """Row-major, each row padded to a whole number of bytes."""
        nb = self.row_bytes()
        return b"".join(r.to_bytes(nb, "little") for r in self.data)

    @classmethod
    def from_bytes(cls, data: bytes, rows: int, cols: int) -> BitMatrix:
        nb = (cols + 7) // 8
        if len(data) != rows * nb:
            raise ValueError(f"expected {rows * nb} bytes for a {rows}x{cols} matrix, got {len(data)}")
        return cls(rows, cols, tuple(int.from_bytes(data[i * nb:(i + 1) * nb], "little") for i in range(rows)))

    def permute_columns(self, perm: Sequence[int]) -> BitMatrix:
        """Column ``j`` of the result is column ``perm[j]`` of ``self``."""
        return BitMatrix.from_dense(self.to_dense()[:, np.asarray(perm, dtype=np.intp)])

    def transpose(self) -> BitMatrix:
        return BitMatrix.from_dense(np.ascontiguousarray(self.to_dense().T))


def vec_add(a: BitVector, b: BitVector) -> BitVector:
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")
    return BitVector(a.length, a.bits ^ b.bits)


def hamming_distance(a: BitVector, b: BitVector) -> int:
    return vec_add(a, b).weight


def mat_vec_mul(x: BitVector, G: BitMatrix) -> BitVector:
    """``xG``: XOR of the rows of ``G`` selected by the set bits of ``x``."""
    if x.length != G.rows:
        raise ValueError(f"vector length {x.length} does not match {G.rows} matrix rows")
    acc = 0
    data = G.data
    b = x.bits
    while b:
        low = b & -b
        acc ^= data[low.bit_length() - 1]
        b ^= low
    return BitVector(G.cols, acc)


def rref(M: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form and pivot columns (zero rows kept at the bottom)."""
    words = np.ascontiguousarray(M.to_words())
    pivots = kernels.rref_inplace(words, M.cols)
    return BitMatrix.from_words(words, M.cols), [int(p) for p in pivots]


def rank(M: BitMatrix) -> int:
    return len(rref(M)[1])


def systematize(M: BitMatrix) -> Optional[tuple[BitMatrix, tuple[int, ...]]]:
    """Bring a k x n matrix to ``[I_k | Q]`` up to a column permutation.

    Returns ``(S, perm)`` with column ``j`` of ``S`` taken from column
    ``perm[j]`` of the row-reduced ``M``, or ``None`` when ``rank(M) < k``.
    """
    if M.rows > M.cols:
        return None
    reduced, pivots = rref(M)
    if len(pivots) < M.rows:
        return None
    if pivots == list(range(M.rows)):
        return reduced, tuple(range(M.cols))
    pivot_set = set(pivots)
    perm = tuple(pivots) + tuple(c for c in range(M.cols) if c not in pivot_set)
    return reduced.permute_columns(perm), perm


def random_vector(length: int, rng: random.Random) -> BitVector:
    return BitVector(length, rng.getrandbits(length) if length else 0)


def sample_constant_weight(n: int, w: int, rng: random.Random) -> BitVector:
    """Uniform word of weight exactly ``w`` via a sparse partial Fisher-Yates shuffle."""
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} out of range for length {n}")
    moved: dict[int, int] = {}
    bits = 0
    for i in range(w):
        j = rng.randrange(i, n)
        bits |= 1 << moved.get(j, j)
        moved[j] = moved.get(i, i)
    return BitVector(n, bits)


def count_ciphertext_space(params: SystemParams) -> int:
    """``N = 2^k * C(n, w)``, the number of (x, e) pairs."""
    return (1 << params.k) * comb(params.n, params.w)
