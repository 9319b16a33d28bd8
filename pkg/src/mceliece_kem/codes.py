"""Code families: an exhaustively decodable toy family and plain MDPC codes.

Both families publish a systematic generator ``G = [I_k | Q]``, so the
message of a decoded codeword is its first ``k`` coordinates.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from .gf2 import BitMatrix, BitVector, SystemParams, mat_vec_mul, systematize

TOY_MAX_N = 24
DEFAULT_MAX_ITERATIONS = 100


class KeyGenerationError(RuntimeError):
    """No acceptable code was found within the retry budget."""


@dataclass(frozen=True)
class DecodeOutcome:
    success: bool
    x: Optional[BitVector] = None
    e: Optional[BitVector] = None
    iterations: int = 0

    def __bool__(self) -> bool:
        return self.success


FAILURE = DecodeOutcome(False)


# ---------------------------------------------------------------------------
# toy family


@dataclass(frozen=True, eq=False)
class ToyCode:
    """Systematic code with a complete coset-leader table.

    ``leaders[s]`` is the minimum-weight word with syndrome ``s`` (ties broken
    deterministically) and ``leader_weights[s]`` its weight.  Syndromes whose
    leader is heavier than ``w`` are the non-decodable ones.
    """

    generator: BitMatrix
    w: int
    leaders: np.ndarray = field(repr=False)
    leader_weights: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    @cached_property
    def redundancy(self) -> BitMatrix:
        """The ``Q`` block of ``[I_k | Q]``, as a k x (n-k) matrix."""
        k = self.k
        return BitMatrix(k, self.n - k, tuple(row >> k for row in self.generator.data))

    def syndrome(self, y: BitVector) -> int:
        k = self.k
        low = BitVector(k, y.bits & ((1 << k) - 1))
        return mat_vec_mul(low, self.redundancy).bits ^ (y.bits >> k)

    def is_decodable(self, syndrome: int) -> bool:
        return int(self.leader_weights[syndrome]) <= self.w

    def __eq__(self, other):
        if not isinstance(other, ToyCode):
            return NotImplemented
        return self.generator == other.generator and self.w == other.w


def _column_syndromes(Q: Sequence[int], k: int, r: int) -> list[int]:
    # H = [Q^T | I_r]: column j < k is row j of Q, column k + i is unit vector i
    return list(Q) + [1 << i for i in range(r)]


def _corrects(col_syn: Sequence[int], w: int) -> bool:
    seen = {0}
    for t in range(1, w + 1):
        for cols in combinations(col_syn, t):
            s = 0
            for c in cols:
                s ^= c
            if s in seen:
                return False
            seen.add(s)
    return True


def coset_leaders(col_syn: Sequence[int], r: int) -> tuple[np.ndarray, np.ndarray]:
    """Breadth-first coset-leader table over all ``2^r`` syndromes."""
    n = len(col_syn)
    size = 1 << r
    leader = np.full(size, -1, dtype=np.int64)
    weight = np.full(size, 255, dtype=np.uint8)
    leader[0] = 0
    weight[0] = 0
    cols = np.asarray(col_syn, dtype=np.int64)
    units = np.int64(1) << np.arange(n, dtype=np.int64)
    frontier = np.zeros(1, dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        cand_s = (frontier[:, None] ^ cols[None, :]).ravel()
        cand_l = (leader[frontier][:, None] ^ units[None, :]).ravel()
        fresh = weight[cand_s] == 255
        cand_s, cand_l = cand_s[fresh], cand_l[fresh]
        uniq, idx = np.unique(cand_s, return_index=True)
        leader[uniq] = cand_l[idx]
        weight[uniq] = d
        frontier = uniq
    return leader, weight


def toy_from_generator(G: BitMatrix, w: int) -> Optional[ToyCode]:
    """Build the toy description for a systematic ``G``; ``None`` if not w-correcting."""
    k, n = G.rows, G.cols
    if any((row & ((1 << k) - 1)) != 1 << i for i, row in enumerate(G.data)):
        raise ValueError("generator is not in systematic form [I_k | Q]")
    if n > TOY_MAX_N:
        raise ValueError(f"toy family limited to n <= {TOY_MAX_N}")
    r = n - k
    col_syn = _column_syndromes([row >> k for row in G.data], k, r)
    if not _corrects(col_syn, w):
        return None
    leaders, weights = coset_leaders(col_syn, r)
    return ToyCode(G, w, leaders, weights)


def toy_keygen(params: SystemParams, rng: random.Random, max_attempts: int = 10_000) -> tuple[ToyCode, BitMatrix]:
    """Sample a systematic w-error-correcting [n, k] code with its syndrome table."""
    n, k, w = params.n, params.k, params.w
    if n > TOY_MAX_N:
        raise ValueError(f"toy family limited to n <= {TOY_MAX_N}, got n={n}")
    r = n - k
    # Hamming bound, and every Q row needs weight >= 2w for distance 2w+1
    if sum(comb(n, i) for i in range(w + 1)) > 1 << r or (w and 2 * w > r):
        raise KeyGenerationError(f"no such code: no binary [{n},{k}] code corrects {w} errors")
    candidates = [v for v in range(1 << r) if v.bit_count() >= 2 * w]
    for _ in range(max_attempts):
        Q = [candidates[rng.randrange(len(candidates))] for _ in range(k)]
        if not _corrects(_column_syndromes(Q, k, r), w):
            continue
        G = BitMatrix(k, n, tuple((1 << i) | (q << k) for i, q in enumerate(Q)))
        code = toy_from_generator(G, w)
        if code is not None:
            return code, G
    raise KeyGenerationError(
        f"no such code: no {w}-error-correcting [{n},{k}] code found in {max_attempts} samples")


def toy_decode(code: ToyCode, y: BitVector) -> DecodeOutcome:
    if y.length != code.n:
        raise ValueError(f"word length {y.length} != n={code.n}")
    s = code.syndrome(y)
    if not code.is_decodable(s):
        return FAILURE
    e = BitVector(code.n, int(code.leaders[s]))
    k = code.k
    x = BitVector(k, (y.bits ^ e.bits) & ((1 << k) - 1))
    return DecodeOutcome(True, x, e)


# ---------------------------------------------------------------------------
# MDPC family


@dataclass(frozen=True, eq=False)
class MdpcCode:
    """Sparse parity-check description; ``parity_rows`` is an (n-k) x row_weight index array."""

    n: int
    k: int
    w: int
    parity_rows: np.ndarray = field(repr=False)
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    thresholds: tuple[int, ...] = ()

    def __post_init__(self):
        rows = np.ascontiguousarray(self.parity_rows, dtype=np.int32)
        if rows.ndim != 2 or rows.shape[0] != self.n - self.k:
            raise ValueError("parity_rows must be (n-k) x row_weight")
        if rows.size and (rows.min() < 0 or rows.max() >= self.n):
            raise ValueError("parity index out of range")
        rows = np.sort(rows, axis=1)
        if rows.shape[1] > 1 and (np.diff(rows, axis=1) == 0).any():
            raise ValueError("repeated column in a parity row")
        rows.setflags(write=False)
        object.__setattr__(self, "parity_rows", rows)
        flat = rows.ravel()
        order = np.argsort(flat, kind="stable")
        col_rows = (order // max(rows.shape[1], 1)).astype(np.int32)
        degree = np.bincount(flat, minlength=self.n)
        col_ptr = np.zeros(self.n + 1, dtype=np.int32)
        np.cumsum(degree, out=col_ptr[1:])
        object.__setattr__(self, "_col_ptr", col_ptr)
        object.__setattr__(self, "_col_rows", col_rows)
        object.__setattr__(self, "majority", int(degree.max()) // 2 + 1 if degree.size else 1)

    @property
    def row_weight(self) -> int:
        return self.parity_rows.shape[1]

    @property
    def column_degrees(self) -> np.ndarray:
        return np.diff(self._col_ptr)

    def syndrome(self, y: BitVector) -> np.ndarray:
        return np.bitwise_xor.reduce(y.to_array()[self.parity_rows], axis=1)

    def parity_matrix(self) -> BitMatrix:
        return BitMatrix(self.n - self.k, self.n,
                         tuple(sum(1 << int(c) for c in row) for row in self.parity_rows))

    def __eq__(self, other):
        if not isinstance(other, MdpcCode):
            return NotImplemented
        return ((self.n, self.k, self.w, self.max_iterations, self.thresholds)
                == (other.n, other.k, other.w, other.max_iterations, other.thresholds)
                and np.array_equal(self.parity_rows, other.parity_rows))


def regular_parity_rows(n: int, r: int, row_weight: int, rng: random.Random,
                        max_attempts: int = 100) -> np.ndarray:
    """Random r x row_weight supports whose column degrees differ by at most one."""
    if not 0 < row_weight <= n:
        raise ValueError(f"row weight must be in 1..{n}")
    total = r * row_weight
    base, extra = divmod(total, n)
    for _ in range(max_attempts):
        pool = list(range(n)) * base + rng.sample(range(n), extra)
        rng.shuffle(pool)
        rows = [pool[i * row_weight:(i + 1) * row_weight] for i in range(r)]
        sets = [set(row) for row in rows]
        if _repair_duplicates(rows, sets, rng):
            return np.array(rows, dtype=np.int32).reshape(r, row_weight)
    raise KeyGenerationError("could not build a column-regular parity-check matrix")


def _repair_duplicates(rows, sets, rng, budget_per_slot=1000):
    r = len(rows)
    rw = len(rows[0])
    for i in range(r):
        if len(sets[i]) == rw:
            continue
        seen = set()
        for a in range(rw):
            v = rows[i][a]
            if v not in seen:
                seen.add(v)
                continue
            # swap the duplicate with a slot of another row that accepts it
            for _ in range(budget_per_slot):
                j = rng.randrange(r)
                b = rng.randrange(rw)
                u = rows[j][b]
                # only trade with rows that are already duplicate-free, so sets[j] stays exact
                if j != i and len(sets[j]) == rw and u not in sets[i] and v not in sets[j]:
                    rows[i][a], rows[j][b] = u, v
                    sets[j].discard(u)
                    sets[j].add(v)
                    sets[i].add(u)
                    seen.add(u)
                    break
            else:
                return False
    return all(len(set(row)) == rw for row in rows)


def mdpc_from_parity_rows(params: SystemParams, parity_rows, max_iterations: int = DEFAULT_MAX_ITERATIONS,
                          thresholds: Sequence[int] = ()) -> Optional[tuple[MdpcCode, BitMatrix]]:
    """Derive the systematic generator of ``ker H``; ``None`` if ``H`` is rank deficient.

    Coordinates are permuted so that ``G = [I_k | A^T]``; the returned
    description carries ``H`` in the same (public) coordinates.
    """
    n, k = params.n, params.k
    r = n - k
    rows = np.asarray(parity_rows, dtype=np.int32).reshape(r, -1)
    dense = np.zeros((r, n), dtype=np.uint8)
    np.put_along_axis(dense, rows.astype(np.intp), 1, axis=1)
    H = BitMatrix.from_dense(dense)
    sys_form = systematize(H)
    if sys_form is None:
        return None
    S, perm = sys_form
    A = S.to_dense()[:, r:]
    G = BitMatrix.from_dense(np.hstack([np.eye(k, dtype=np.uint8), np.ascontiguousarray(A.T)]))
    order = np.asarray(perm[r:] + perm[:r], dtype=np.int64)
    inverse = np.empty(n, dtype=np.int32)
    inverse[order] = np.arange(n, dtype=np.int32)
    code = MdpcCode(n, k, params.w, inverse[rows], max_iterations, tuple(int(t) for t in thresholds))
    return code, G


def mdpc_keygen(params: SystemParams, row_weight: int, rng: random.Random,
                max_iterations: int = DEFAULT_MAX_ITERATIONS, thresholds: Sequence[int] = (),
                max_attempts: int = 50) -> tuple[MdpcCode, BitMatrix]:
    """Sample a column-regular sparse ``H`` of constant row weight and its generator."""
    r = params.n - params.k
    degree, extra = divmod(r * row_weight, params.n)
    if not extra and degree % 2 == 0:
        # every column even: the rows of H sum to zero, so rank(H) < r whatever the sample
        raise KeyGenerationError(f"row weight {row_weight} gives every column the even degree {degree}; "
                                 "H would be rank deficient")
    for _ in range(max_attempts):
        rows = regular_parity_rows(params.n, r, row_weight, rng)
        built = mdpc_from_parity_rows(params, rows, max_iterations, thresholds)
        if built is not None:
            return built
    raise KeyGenerationError(f"parity-check matrix stayed rank deficient after {max_attempts} samples")


def bitflip_decode(code: MdpcCode, y: BitVector, max_iterations: Optional[int] = None,
                   thresholds: Optional[Sequence[int]] = None) -> tuple[Optional[BitVector], int]:
    """Gallager bit-flipping.  Returns ``(e, iterations)``; ``e`` is ``None`` on failure.

    Without an explicit schedule each iteration flips every position whose
    unsatisfied-check count reaches ``max(majority, max count)``.  A result
    heavier than ``w`` is reported as failure.
    """
    if y.length != code.n:
        raise ValueError(f"word length {y.length} != n={code.n}")
    if max_iterations is None:
        max_iterations = code.max_iterations
    if thresholds is None:
        thresholds = code.thresholds
    word, iterations, ok = kernels.bitflip(
        code.parity_rows, code._col_ptr, code._col_rows, y.to_array(), int(max_iterations),
        np.asarray(thresholds, dtype=np.int32), code.majority)
    if not ok:
        return None, iterations
    e = BitVector(code.n, y.bits ^ BitVector.from_array(word).bits)
    if e.weight > code.w:
        return None, iterations
    return e, iterations


def mdpc_decode(code: MdpcCode, y: BitVector) -> DecodeOutcome:
    e, iterations = bitflip_decode(code, y)
    if e is None:
        return DecodeOutcome(False, iterations=iterations)
    k = code.k
    x = BitVector(k, (y.bits ^ e.bits) & ((1 << k) - 1))
    return DecodeOutcome(True, x, e, iterations)


CodeDescription = Union[ToyCode, MdpcCode]


def decode(delta: CodeDescription, y: BitVector) -> DecodeOutcome:
    """Decode ``y`` with the private description; failure is a value, never raised."""
    if isinstance(delta, ToyCode):
        return toy_decode(delta, y)
    return mdpc_decode(delta, y)
